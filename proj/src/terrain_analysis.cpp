#include "backhaul/terrain_analysis.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "backhaul/errors.hpp"
#include "backhaul/format.hpp"
#include "backhaul/random.hpp"
#include "backhaul/viewshed.hpp"

namespace backhaul {

namespace {

// Number of tiles needed so that every cell centre in [0, n*cell) falls in one.
std::size_t tile_count(std::size_t cells, double cell, double tile) {
    const double last_center = (static_cast<double>(cells) - 0.5) * cell;
    return static_cast<std::size_t>(std::floor(last_center / tile)) + 1;
}

// First cell whose centre is at or beyond `edge` (offsets from the origin).
std::size_t first_cell_at(double edge, double cell, std::size_t cells) {
    const double idx = std::ceil(edge / cell - 0.5);
    return std::min(static_cast<std::size_t>(std::max(idx, 0.0)), cells);
}

}  // namespace

std::vector<TerrainTile> partition_tiles(const RasterGrid& dem, double tile_km) {
    if (!(tile_km > 0.0)) throw ConfigError("tile size must be positive");
    const auto& h = dem.header();
    const double tile_m = tile_km * 1000.0;
    const std::size_t ntx = tile_count(h.ncols, h.cellsize, tile_m);
    const std::size_t nty = tile_count(h.nrows, h.cellsize, tile_m);

    std::vector<TerrainTile> tiles;
    tiles.reserve(ntx * nty);
    for (std::size_t ty = 0; ty < nty; ++ty) {
        for (std::size_t tx = 0; tx < ntx; ++tx) {
            TerrainTile t;
            t.tile_id = ty * ntx + tx;
            t.x0 = h.xll + static_cast<double>(tx) * tile_m;
            t.x1 = std::min(h.xll + static_cast<double>(tx + 1) * tile_m, h.xll + h.width());
            t.y0 = h.yll + static_cast<double>(ty) * tile_m;
            t.y1 = std::min(h.yll + static_cast<double>(ty + 1) * tile_m, h.yll + h.height());
            t.col_begin = first_cell_at(static_cast<double>(tx) * tile_m, h.cellsize, h.ncols);
            t.col_end = first_cell_at(static_cast<double>(tx + 1) * tile_m, h.cellsize, h.ncols);
            // rows from the south, then flipped to top-down indices
            const std::size_t south_begin = first_cell_at(static_cast<double>(ty) * tile_m, h.cellsize, h.nrows);
            const std::size_t south_end = first_cell_at(static_cast<double>(ty + 1) * tile_m, h.cellsize, h.nrows);
            t.row_begin = h.nrows - south_end;
            t.row_end = h.nrows - south_begin;
            tiles.push_back(t);
        }
    }
    return tiles;
}

double percentile(std::vector<double>& values, double p) {
    if (values.empty()) throw MissingDataError("percentile of an empty set");
    std::sort(values.begin(), values.end());
    const double pos = p * static_cast<double>(values.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const auto hi = std::min(lo + 1, values.size() - 1);
    const double frac = pos - static_cast<double>(lo);
    return values[lo] + (values[hi] - values[lo]) * frac;
}

double interdecile_range(const TerrainTile& tile, const RasterGrid& dem) {
    std::vector<double> values;
    values.reserve((tile.col_end - tile.col_begin) * (tile.row_end - tile.row_begin));
    for (std::size_t r = tile.row_begin; r < tile.row_end; ++r) {
        for (std::size_t c = tile.col_begin; c < tile.col_end; ++c) {
            if (!dem.is_missing(c, r)) values.push_back(dem.at(c, r));
        }
    }
    if (values.size() < 10) {
        throw MissingDataError("tile " + std::to_string(tile.tile_id) + " has " + std::to_string(values.size()) +
                               " valid elevation cells, at least 10 required");
    }
    const double p90 = percentile(values, 0.9);
    const double p10 = percentile(values, 0.1);
    return p90 - p10;
}

std::vector<std::string> compute_terrain_irregularity(std::vector<TerrainTile>& tiles, const RasterGrid& dem) {
    std::vector<std::string> warnings;
    for (auto& t : tiles) {
        try {
            t.delta_h_m = interdecile_range(t, dem);
        } catch (const MissingDataError& e) {
            t.delta_h_m = RasterGrid::missing;
            warnings.emplace_back(std::string(e.what()) + "; tile excluded from deciles");
        }
    }
    return warnings;
}

DecileAssignment assign_deciles(std::vector<TerrainTile> tiles) {
    DecileAssignment out;
    std::vector<std::size_t> order;
    for (std::size_t i = 0; i < tiles.size(); ++i) {
        tiles[i].decile = 0;
        if (tiles[i].has_delta_h()) order.push_back(i);
    }
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (tiles[a].delta_h_m != tiles[b].delta_h_m) return tiles[a].delta_h_m < tiles[b].delta_h_m;
        return tiles[a].tile_id < tiles[b].tile_id;
    });
    const std::size_t n = order.size();
    for (std::size_t rank = 0; rank < n; ++rank) {
        tiles[order[rank]].decile = static_cast<int>(rank * 10 / n) + 1;
    }
    if (n < 10) {
        out.degraded = true;
        out.warnings.push_back("only " + std::to_string(n) +
                               " tiles have a terrain irregularity value; deciles assigned by global quantiles");
    }
    out.tiles = std::move(tiles);
    return out;
}

LosLookupTable::LosLookupTable(double bin_width_km, double max_km) : bin_width_km_(bin_width_km), max_km_(max_km) {
    if (!(bin_width_km > 0.0) || !(max_km > 0.0)) throw ConfigError("LOS bin width and range must be positive");
    const auto nbins = static_cast<std::size_t>(std::ceil(max_km / bin_width_km - 1e-9));
    bins_.assign(10, std::vector<Bin>(nbins));
}

std::size_t LosLookupTable::bin_index(double distance_km) const {
    if (!(distance_km >= 0.0) || distance_km > max_km_) {
        throw RangeError("distance " + format_number(distance_km) + " km outside the LOS lookup range [0, " +
                         format_number(max_km_) + "]");
    }
    return std::min(static_cast<std::size_t>(std::floor(distance_km / bin_width_km_)), bin_count() - 1);
}

LosLookupTable::Bin& LosLookupTable::at(int decile, std::size_t bin) {
    if (decile < 1 || decile > 10) throw RangeError("decile " + std::to_string(decile) + " outside 1..10");
    return bins_.at(static_cast<std::size_t>(decile - 1)).at(bin);
}

const LosLookupTable::Bin& LosLookupTable::at(int decile, std::size_t bin) const {
    if (decile < 1 || decile > 10) throw RangeError("decile " + std::to_string(decile) + " outside 1..10");
    return bins_.at(static_cast<std::size_t>(decile - 1)).at(bin);
}

bool LosLookupTable::row_populated(int decile) const {
    const auto& row = bins_.at(static_cast<std::size_t>(decile - 1));
    return std::any_of(row.begin(), row.end(), [](const Bin& b) { return !std::isnan(b.p_los); });
}

CsvTable LosLookupTable::to_csv() const {
    CsvTable t{{"decile", "bin_lo_km", "bin_hi_km", "p_los", "n_pairs"}, {}};
    for (int d = 1; d <= 10; ++d) {
        for (std::size_t b = 0; b < bin_count(); ++b) {
            const double lo = static_cast<double>(b) * bin_width_km_;
            const double hi = std::min(lo + bin_width_km_, max_km_);
            const auto& bin = at(d, b);
            t.add_row({std::int64_t{d}, lo, hi, bin.p_los, bin.n_pairs});
        }
    }
    return t;
}

LosLookupTable LosLookupTable::from_csv(const CsvDocument& doc) {
    const auto c_dec = doc.column("decile");
    const auto c_lo = doc.column("bin_lo_km");
    const auto c_hi = doc.column("bin_hi_km");
    const auto c_p = doc.column("p_los");
    const auto c_n = doc.column("n_pairs");
    if (doc.rows.empty()) throw StructuralError("LOS lookup CSV has no rows");

    auto num = [](const std::string& s) {
        try {
            std::size_t used = 0;
            const double v = std::stod(s, &used);
            if (used != s.size()) throw ParseError("");
            return v;
        } catch (...) {
            throw ParseError("malformed number '" + s + "' in LOS lookup CSV");
        }
    };
    const double width = num(doc.rows.front()[c_hi]) - num(doc.rows.front()[c_lo]);
    double max_km = 0.0;
    for (const auto& row : doc.rows) max_km = std::max(max_km, num(row[c_hi]));
    LosLookupTable table(width, max_km);
    if (doc.rows.size() != 10 * table.bin_count()) {
        throw StructuralError("LOS lookup CSV must hold 10 x " + std::to_string(table.bin_count()) + " rows");
    }
    for (const auto& row : doc.rows) {
        const int decile = static_cast<int>(num(row[c_dec]));
        auto& bin = table.at(decile, table.bin_index(num(row[c_lo])));
        bin.p_los = row[c_p].empty() ? RasterGrid::missing : num(row[c_p]);
        bin.n_pairs = static_cast<std::int64_t>(num(row[c_n]));
        if (!std::isnan(bin.p_los) && (bin.p_los < 0.0 || bin.p_los > 1.0)) {
            throw ValidationError("LOS probability outside [0,1] in lookup CSV", 0);
        }
    }
    return table;
}

bool operator==(const LosLookupTable& a, const LosLookupTable& b) {
    if (a.bin_width_km_ != b.bin_width_km_ || a.max_km_ != b.max_km_) return false;
    for (std::size_t d = 0; d < 10; ++d) {
        for (std::size_t i = 0; i < a.bin_count(); ++i) {
            const auto& x = a.bins_[d][i];
            const auto& y = b.bins_[d][i];
            const bool same_p = (std::isnan(x.p_los) && std::isnan(y.p_los)) || x.p_los == y.p_los;
            if (!same_p || x.n_pairs != y.n_pairs) return false;
        }
    }
    return true;
}

std::vector<Point> sample_tile_points(const TerrainTile& tile, double cell_km, std::uint64_t seed) {
    const double cell = cell_km * 1000.0;
    const auto nx = static_cast<std::size_t>(std::ceil((tile.x1 - tile.x0) / cell - 1e-9));
    const auto ny = static_cast<std::size_t>(std::ceil((tile.y1 - tile.y0) / cell - 1e-9));
    std::vector<Point> points;
    points.reserve(nx * ny);
    for (std::size_t j = 0; j < ny; ++j) {
        for (std::size_t i = 0; i < nx; ++i) {
            const double cx0 = tile.x0 + static_cast<double>(i) * cell;
            const double cy0 = tile.y0 + static_cast<double>(j) * cell;
            const double cx1 = std::min(cx0 + cell, tile.x1);
            const double cy1 = std::min(cy0 + cell, tile.y1);
            RandomStream rng(derive_seed(seed, {0x7117eULL, tile.tile_id, j * nx + i}));
            const double x = rng.uniform(cx0, cx1);
            const double y = rng.uniform(cy0, cy1);
            points.push_back({x, y});
        }
    }
    return points;
}

LosLookupBuild build_los_lookup(const std::vector<TerrainTile>& tiles, const RasterGrid& dem, std::uint64_t seed,
                                const LosLookupOptions& options) {
    if (options.tiles_per_decile < 1) throw ConfigError("tiles_per_decile must be at least 1");
    LosLookupBuild out{LosLookupTable(options.bin_width_km, options.max_km), {}, {}, {}};
    auto& table = out.table;
    out.sampled_tiles.resize(10);
    const double step = options.step_m > 0.0 ? options.step_m : dem.cellsize();

    for (int decile = 1; decile <= 10; ++decile) {
        std::vector<std::size_t> candidates;
        for (std::size_t i = 0; i < tiles.size(); ++i) {
            if (tiles[i].decile == decile) candidates.push_back(i);
        }
        std::sort(candidates.begin(), candidates.end(),
                  [&](std::size_t a, std::size_t b) { return tiles[a].tile_id < tiles[b].tile_id; });
        // partial Fisher-Yates: first k entries are the chosen tiles
        RandomStream pick(derive_seed(seed, {0xdec11eULL, static_cast<std::uint64_t>(decile)}));
        const std::size_t k = std::min(options.tiles_per_decile, candidates.size());
        for (std::size_t i = 0; i < k; ++i) {
            const auto j = i + pick.below(candidates.size() - i);
            std::swap(candidates[i], candidates[j]);
        }
        candidates.resize(k);

        std::vector<std::int64_t> visible(table.bin_count(), 0);
        std::vector<std::int64_t> total(table.bin_count(), 0);
        for (std::size_t idx : candidates) {
            const auto& tile = tiles[idx];
            out.sampled_tiles[static_cast<std::size_t>(decile - 1)].push_back(tile.tile_id);
            const auto points = sample_tile_points(tile, options.sample_cell_km, seed);
            out.points_per_tile.push_back(points.size());
            for (std::size_t a = 0; a < points.size(); ++a) {
                for (std::size_t b = 0; b < points.size(); ++b) {
                    if (a == b) continue;
                    const double d_km = distance_m(points[a], points[b]) / 1000.0;
                    if (!(d_km > 0.0) || d_km > options.max_km) continue;
                    const auto profile = extract_profile(dem, points[a], points[b], step);
                    const auto los = line_of_sight(profile, options.tower_m, options.tower_m, options.curvature);
                    const auto bin = table.bin_index(d_km);
                    ++total[bin];
                    if (los.visible) ++visible[bin];
                }
            }
        }
        for (std::size_t b = 0; b < table.bin_count(); ++b) {
            auto& bin = table.at(decile, b);
            bin.n_pairs = total[b];
            bin.p_los = total[b] > 0 ? static_cast<double>(visible[b]) / static_cast<double>(total[b])
                                     : RasterGrid::missing;
        }
    }

    std::vector<int> populated;
    for (int d = 1; d <= 10; ++d) {
        if (table.row_populated(d)) populated.push_back(d);
    }
    if (populated.empty()) throw MissingDataError("no decile produced any sampled LOS pair");
    for (int d = 1; d <= 10; ++d) {
        if (table.row_populated(d)) continue;
        out.warnings.push_back("decile " + std::to_string(d) + " has no usable tile; interpolated from neighbours");
        int lower = 0;
        int upper = 0;
        for (int p : populated) {
            if (p < d) lower = p;
            if (p > d && upper == 0) upper = p;
        }
        for (std::size_t b = 0; b < table.bin_count(); ++b) {
            const double lo = lower ? table.at(lower, b).p_los : RasterGrid::missing;
            const double hi = upper ? table.at(upper, b).p_los : RasterGrid::missing;
            double p = RasterGrid::missing;
            if (!std::isnan(lo) && !std::isnan(hi)) {
                const double w = static_cast<double>(d - lower) / static_cast<double>(upper - lower);
                p = lo + (hi - lo) * w;
            } else if (!std::isnan(lo)) {
                p = lo;
            } else if (!std::isnan(hi)) {
                p = hi;
            }
            table.at(d, b).p_los = p;
        }
    }
    return out;
}

double lookup_probability(const LosLookupTable& table, int decile, double distance_km) {
    const auto bin = table.bin_index(distance_km);
    if (!std::isnan(table.at(decile, bin).p_los)) return table.at(decile, bin).p_los;
    for (std::size_t off = 1; off < table.bin_count(); ++off) {
        if (off <= bin && !std::isnan(table.at(decile, bin - off).p_los)) return table.at(decile, bin - off).p_los;
        if (bin + off < table.bin_count() && !std::isnan(table.at(decile, bin + off).p_los)) {
            return table.at(decile, bin + off).p_los;
        }
    }
    throw LookupError("LOS lookup row for decile " + std::to_string(decile) + " is empty");
}

}  // namespace backhaul
