#include "backhaul/demand.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <numeric>

#include "backhaul/errors.hpp"
#include "backhaul/format.hpp"

namespace backhaul {

std::vector<Settlement> extract_settlements(const RasterGrid& population, const SettlementThresholds& thresholds) {
    if (thresholds.connectivity != 4 && thresholds.connectivity != 8) {
        throw ConfigError("settlement connectivity must be 4 or 8");
    }
    const std::size_t nc = population.ncols();
    const std::size_t nr = population.nrows();
    const double cell_km2 = population.header().cell_area_km2();

    std::vector<char> dense(nc * nr, 0);
    for (std::size_t r = 0; r < nr; ++r) {
        for (std::size_t c = 0; c < nc; ++c) {
            const double v = population.at(c, r);
            dense[r * nc + c] = !std::isnan(v) && v / cell_km2 > thresholds.density_min_per_km2;
        }
    }

    std::vector<Settlement> out;
    std::vector<char> seen(nc * nr, 0);
    std::deque<std::size_t> queue;
    for (std::size_t start = 0; start < nc * nr; ++start) {
        if (!dense[start] || seen[start]) continue;
        seen[start] = 1;
        queue.assign(1, start);
        double total = 0.0, wx = 0.0, wy = 0.0;
        while (!queue.empty()) {
            const std::size_t idx = queue.front();
            queue.pop_front();
            const std::size_t r = idx / nc;
            const std::size_t c = idx % nc;
            const double pop = population.at(c, r);
            const Point centre = population.cell_center(c, r);
            total += pop;
            wx += pop * centre.x;
            wy += pop * centre.y;
            for (int dr = -1; dr <= 1; ++dr) {
                for (int dc = -1; dc <= 1; ++dc) {
                    if (dr == 0 && dc == 0) continue;
                    if (thresholds.connectivity == 4 && dr != 0 && dc != 0) continue;
                    const auto rr = static_cast<std::ptrdiff_t>(r) + dr;
                    const auto cc = static_cast<std::ptrdiff_t>(c) + dc;
                    if (rr < 0 || cc < 0 || rr >= static_cast<std::ptrdiff_t>(nr) || cc >= static_cast<std::ptrdiff_t>(nc)) {
                        continue;
                    }
                    const auto n = static_cast<std::size_t>(rr) * nc + static_cast<std::size_t>(cc);
                    if (dense[n] && !seen[n]) {
                        seen[n] = 1;
                        queue.push_back(n);
                    }
                }
            }
        }
        if (total < thresholds.population_min) continue;
        Settlement s;
        s.id = out.size();
        s.population = total;
        s.location = {wx / total, wy / total};
        s.is_major = total > thresholds.major_min;
        out.push_back(s);
    }
    return out;
}

RainMap parse_rain_map(const CsvDocument& doc) {
    const auto c_id = doc.column("admin_id");
    const auto c_class = doc.column("class");
    RainMap map;
    for (const auto& row : doc.rows) {
        std::int64_t id = 0;
        try {
            std::size_t used = 0;
            id = std::stoll(row[c_id], &used);
            if (used != row[c_id].size()) throw std::invalid_argument("trailing");
        } catch (const std::exception&) {
            throw ParseError("malformed admin_id '" + row[c_id] + "' in rain map");
        }
        if (!map.emplace(id, parse_rain_class(row[c_class])).second) {
            throw StructuralError("duplicate admin_id " + std::to_string(id) + " in rain map");
        }
    }
    return map;
}

RainMap read_rain_map(const std::filesystem::path& path) { return parse_rain_map(read_csv(path)); }

std::vector<RasterGrid::CellIndex> rasterize_segment(const GridHeader& grid, Point a, Point b) {
    const double gx0 = (a.x - grid.xll) / grid.cellsize;
    const double gy0 = (a.y - grid.yll) / grid.cellsize;
    const double gx1 = (b.x - grid.xll) / grid.cellsize;
    const double gy1 = (b.y - grid.yll) / grid.cellsize;
    auto clampi = [](double v, std::size_t n) {
        return static_cast<std::ptrdiff_t>(std::clamp(std::floor(v), 0.0, static_cast<double>(n - 1)));
    };
    std::ptrdiff_t ix = clampi(gx0, grid.ncols);
    std::ptrdiff_t iy = clampi(gy0, grid.nrows);
    const std::ptrdiff_t ex = clampi(gx1, grid.ncols);
    const std::ptrdiff_t ey = clampi(gy1, grid.nrows);

    const double dx = gx1 - gx0;
    const double dy = gy1 - gy0;
    const std::ptrdiff_t sx = dx > 0 ? 1 : (dx < 0 ? -1 : 0);
    const std::ptrdiff_t sy = dy > 0 ? 1 : (dy < 0 ? -1 : 0);
    constexpr double inf = std::numeric_limits<double>::infinity();
    double t_max_x = sx == 0 ? inf : ((static_cast<double>(ix) + (sx > 0 ? 1.0 : 0.0)) - gx0) / dx;
    double t_max_y = sy == 0 ? inf : ((static_cast<double>(iy) + (sy > 0 ? 1.0 : 0.0)) - gy0) / dy;
    const double t_dx = sx == 0 ? inf : 1.0 / std::abs(dx);
    const double t_dy = sy == 0 ? inf : 1.0 / std::abs(dy);

    std::vector<RasterGrid::CellIndex> cells;
    auto emit = [&] {
        cells.push_back({static_cast<std::size_t>(ix), grid.nrows - 1 - static_cast<std::size_t>(iy)});
    };
    emit();
    const auto max_steps = std::abs(ex - ix) + std::abs(ey - iy);
    for (std::ptrdiff_t step = 0; step < max_steps; ++step) {
        if (ix == ex && iy == ey) break;
        if (t_max_x < t_max_y) {
            if (ix == ex) break;
            ix += sx;
            t_max_x += t_dx;
        } else {
            if (iy == ey) break;
            iy += sy;
            t_max_y += t_dy;
        }
        emit();
    }
    if (ix != ex || iy != ey) {
        // numerical drift at exact corner crossings; finish with axis moves
        while (ix != ex) {
            ix += ix < ex ? 1 : -1;
            emit();
        }
        while (iy != ey) {
            iy += iy < ey ? 1 : -1;
            emit();
        }
    }
    return cells;
}

namespace {

class UnionFind {
public:
    std::size_t add() {
        parent_.push_back(parent_.size());
        return parent_.size() - 1;
    }
    std::size_t find(std::size_t x) {
        while (parent_[x] != x) {
            parent_[x] = parent_[parent_[x]];
            x = parent_[x];
        }
        return x;
    }
    void unite(std::size_t a, std::size_t b) {
        a = find(a);
        b = find(b);
        if (a == b) return;
        if (b < a) std::swap(a, b);
        parent_[b] = a;  // lowest index stays root
    }

private:
    std::vector<std::size_t> parent_;
};

std::optional<std::int64_t> admin_at(const RasterGrid& admin, RasterGrid::CellIndex c) {
    const double v = admin.at(c.col, c.row);
    if (std::isnan(v)) return std::nullopt;
    return static_cast<std::int64_t>(v);
}

std::int64_t nearest_admin(const RasterGrid& admin, Point p) {
    double best = std::numeric_limits<double>::infinity();
    std::optional<std::int64_t> id;
    for (std::size_t r = 0; r < admin.nrows(); ++r) {
        for (std::size_t c = 0; c < admin.ncols(); ++c) {
            if (admin.is_missing(c, r)) continue;
            const double d = distance_m(admin.cell_center(c, r), p);
            if (d < best) {
                best = d;
                id = static_cast<std::int64_t>(admin.at(c, r));
            }
        }
    }
    if (!id) throw MissingDataError("admin raster contains no valid cells");
    return *id;
}

}  // namespace

RegionBuild build_modeling_regions(const std::vector<Settlement>& settlements, const RasterGrid& admin,
                                   const RasterGrid& population, const RainMap& rain,
                                   const std::vector<TerrainTile>& tiles) {
    require_aligned(admin.header(), population.header(), "admin regions vs population");
    RegionBuild out;

    std::vector<std::size_t> majors;
    for (const auto& s : settlements) {
        if (s.is_major) majors.push_back(s.id);
    }
    if (majors.empty()) throw ConfigError("no major settlement found; every modeling region needs one");

    std::map<std::int64_t, std::size_t> node_of;
    UnionFind uf;
    auto node = [&](std::int64_t admin_id) {
        auto [it, inserted] = node_of.try_emplace(admin_id, 0);
        if (inserted) it->second = uf.add();
        return it->second;
    };

    std::vector<std::int64_t> home(settlements.size());
    for (const auto& s : settlements) {
        const auto id = admin_at(admin, admin.cell_of(s.location));
        if (id) {
            home[s.id] = *id;
        } else {
            home[s.id] = nearest_admin(admin, s.location);
            out.warnings.push_back("settlement " + std::to_string(s.id) + " lies on a nodata admin cell; assigned to area " +
                                   std::to_string(home[s.id]));
        }
        node(home[s.id]);
    }

    out.nearest_major.assign(settlements.size(), 0);
    for (const auto& s : settlements) {
        if (s.is_major) {
            out.nearest_major[s.id] = s.id;
            continue;
        }
        std::size_t best = majors.front();
        double best_d = std::numeric_limits<double>::infinity();
        for (std::size_t m : majors) {
            const double d = distance_m(s.location, settlements[m].location);
            if (d < best_d) {
                best_d = d;
                best = m;
            }
        }
        out.nearest_major[s.id] = best;
        const std::size_t anchor_node = node(home[best]);
        uf.unite(node(home[s.id]), anchor_node);
        for (const auto cell : rasterize_segment(admin.header(), s.location, settlements[best].location)) {
            if (const auto id = admin_at(admin, cell)) uf.unite(node(*id), anchor_node);
        }
    }

    // group admin areas by root; only groups containing a major become regions
    std::map<std::size_t, std::set<std::int64_t>> groups;
    for (const auto& [admin_id, n] : node_of) groups[uf.find(n)].insert(admin_id);

    std::map<std::size_t, std::size_t> anchor_of_root;
    for (std::size_t m : majors) {
        const std::size_t root = uf.find(node_of.at(home[m]));
        auto it = anchor_of_root.find(root);
        if (it == anchor_of_root.end()) {
            anchor_of_root.emplace(root, m);
        } else if (settlements[m].population > settlements[it->second].population) {
            it->second = m;
        }
    }
    std::vector<std::pair<std::size_t, std::size_t>> by_anchor;  // (anchor, root)
    for (const auto& [root, anchor] : anchor_of_root) by_anchor.emplace_back(anchor, root);
    std::sort(by_anchor.begin(), by_anchor.end());

    std::map<std::size_t, std::size_t> region_of_root;
    for (const auto& [anchor, root] : by_anchor) {
        ModelingRegion region;
        region.region_id = out.regions.size();
        region.anchor = anchor;
        region.member_admin_ids = groups.at(root);
        region_of_root.emplace(root, region.region_id);
        out.regions.push_back(std::move(region));
    }

    out.settlement_region.assign(settlements.size(), 0);
    for (const auto& s : settlements) {
        const std::size_t root = uf.find(node_of.at(home[s.id]));
        const auto it = region_of_root.find(root);
        if (it == region_of_root.end()) throw ContractViolation("settlement left outside every modeling region");
        out.settlement_region[s.id] = it->second;
        out.regions[it->second].settlements.push_back(s.id);
    }

    // areal statistics from the admin and population rasters
    std::map<std::int64_t, std::size_t> region_of_admin;
    for (const auto& r : out.regions) {
        for (auto id : r.member_admin_ids) region_of_admin.emplace(id, r.region_id);
    }
    std::vector<std::ptrdiff_t> tile_of_cell(admin.ncols() * admin.nrows(), -1);
    for (std::size_t t = 0; t < tiles.size(); ++t) {
        if (tiles[t].decile < 1) continue;
        for (std::size_t r = tiles[t].row_begin; r < std::min(tiles[t].row_end, admin.nrows()); ++r) {
            for (std::size_t c = tiles[t].col_begin; c < std::min(tiles[t].col_end, admin.ncols()); ++c) {
                tile_of_cell[r * admin.ncols() + c] = static_cast<std::ptrdiff_t>(t);
            }
        }
    }
    std::vector<std::size_t> cells(out.regions.size(), 0);
    std::vector<std::set<std::size_t>> region_tiles(out.regions.size());
    const double cell_km2 = admin.header().cell_area_km2();
    for (std::size_t r = 0; r < admin.nrows(); ++r) {
        for (std::size_t c = 0; c < admin.ncols(); ++c) {
            if (admin.is_missing(c, r)) continue;
            const auto it = region_of_admin.find(static_cast<std::int64_t>(admin.at(c, r)));
            if (it == region_of_admin.end()) continue;
            auto& region = out.regions[it->second];
            ++cells[it->second];
            if (!population.is_missing(c, r)) region.population += population.at(c, r);
            const auto t = tile_of_cell[r * admin.ncols() + c];
            if (t >= 0) region_tiles[it->second].insert(static_cast<std::size_t>(t));
        }
    }

    for (auto& region : out.regions) {
        region.area_km2 = static_cast<double>(cells[region.region_id]) * cell_km2;
        region.pop_density_per_km2 = region.area_km2 > 0.0 ? region.population / region.area_km2 : 0.0;

        std::optional<RainClass> worst;
        for (auto id : region.member_admin_ids) {
            const auto it = rain.find(id);
            if (it == rain.end()) throw LookupError("rain map has no entry for admin area " + std::to_string(id));
            worst = worst ? worst_rain(*worst, it->second) : it->second;
        }
        region.rain = *worst;

        const auto& ts = region_tiles[region.region_id];
        if (ts.empty()) {
            region.mean_decile = 1;
            out.warnings.push_back("region " + std::to_string(region.region_id) +
                                   " intersects no tile with a terrain decile; using decile 1");
        } else {
            double sum = 0.0;
            for (auto t : ts) sum += tiles[t].decile;
            region.mean_decile = std::clamp(static_cast<int>(std::floor(sum / static_cast<double>(ts.size()) + 0.5)), 1, 10);
        }
    }
    return out;
}

}  // namespace backhaul
