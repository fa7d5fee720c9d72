#include "backhaul/synthetic_world.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>

#include "json.hpp"

#include "backhaul/csv.hpp"
#include "backhaul/errors.hpp"
#include "backhaul/random.hpp"

namespace backhaul {

namespace {

double ridge_height(const WorldSpec& s, double x_km) {
    if (s.ridge_height_m <= 0.0 || x_km < s.ridge_x0_km) return 0.0;
    const double u = std::fmod(x_km - s.ridge_x0_km, s.ridge_period_km);
    const double off = std::abs(u - s.ridge_period_km / 2.0);
    return s.ridge_height_m * std::max(0.0, 1.0 - off / s.ridge_half_width_km);
}

}  // namespace

World make_world(const WorldSpec& s) {
    GridHeader h;
    h.ncols = s.ncols;
    h.nrows = s.nrows;
    h.cellsize = s.cellsize_m;
    h.validate();

    const std::size_t n = s.ncols * s.nrows;
    std::vector<double> dem(n), pop(n, s.background_population), veg(n), canopy(n), admin(n);
    const double width_km = h.width() / 1000.0;
    const auto blocks_x = static_cast<std::size_t>(std::ceil(width_km / s.admin_block_km));
    const double cell_km = s.cellsize_m / 1000.0;
    for (std::size_t r = 0; r < s.nrows; ++r) {
        const double y_km = (static_cast<double>(s.nrows - r) - 0.5) * cell_km;
        for (std::size_t c = 0; c < s.ncols; ++c) {
            const double x_km = (static_cast<double>(c) + 0.5) * cell_km;
            const std::size_t i = r * s.ncols + c;
            dem[i] = s.base_elevation_m + s.slope_m_per_km * y_km + ridge_height(s, x_km);
            const bool east = x_km >= width_km / 2.0;
            veg[i] = east ? s.east_vegetation : s.west_vegetation;
            canopy[i] = east ? s.east_canopy_m : s.west_canopy_m;
            const auto bx = static_cast<std::size_t>(x_km / s.admin_block_km);
            const auto by = static_cast<std::size_t>(y_km / s.admin_block_km);
            admin[i] = static_cast<double>(by * blocks_x + bx + 1);
        }
    }
    for (const auto& st : s.settlements) {
        if (st.block % 2 == 0) throw ConfigError("settlement block size must be odd");
        const auto half = static_cast<std::ptrdiff_t>(st.block / 2);
        const double per_cell = st.population / static_cast<double>(st.block * st.block);
        for (std::ptrdiff_t dr = -half; dr <= half; ++dr) {
            for (std::ptrdiff_t dc = -half; dc <= half; ++dc) {
                const auto rr = static_cast<std::ptrdiff_t>(st.row) + dr;
                const auto cc = static_cast<std::ptrdiff_t>(st.col) + dc;
                if (rr < 0 || cc < 0 || rr >= static_cast<std::ptrdiff_t>(s.nrows) ||
                    cc >= static_cast<std::ptrdiff_t>(s.ncols)) {
                    throw ConfigError("settlement block leaves the world");
                }
                pop[static_cast<std::size_t>(rr) * s.ncols + static_cast<std::size_t>(cc)] = per_cell;
            }
        }
    }

    RainMap rain;
    const auto blocks_y = static_cast<std::size_t>(std::ceil(h.height() / 1000.0 / s.admin_block_km));
    for (std::size_t by = 0; by < blocks_y; ++by) {
        for (std::size_t bx = 0; bx < blocks_x; ++bx) {
            const double cx = (static_cast<double>(bx) + 0.5) * s.admin_block_km;
            rain[static_cast<std::int64_t>(by * blocks_x + bx + 1)] = cx >= width_km / 2.0 ? s.east_rain : s.west_rain;
        }
    }

    return World{RasterGrid(h, LayerKind::elevation_m, std::move(dem)),
                 RasterGrid(h, LayerKind::population_per_cell, std::move(pop)),
                 RasterGrid(h, LayerKind::vegetation_fraction, std::move(veg)),
                 RasterGrid(h, LayerKind::canopy_height_m, std::move(canopy)),
                 RasterGrid(h, LayerKind::region_id, std::move(admin)), std::move(rain)};
}

WorldSpec desk_world_spec(bool ridged, std::uint64_t seed) {
    WorldSpec s;
    if (ridged) s.ridge_height_m = 80.0;

    constexpr std::array<std::size_t, 2> centres = {51, 148};
    for (auto row : centres) {
        for (auto col : centres) s.settlements.push_back({col, row, 22500.0, 3});
    }

    const double cell_km = s.cellsize_m / 1000.0;
    const auto valley_step = static_cast<std::size_t>(std::lround(s.ridge_period_km / cell_km));
    const auto first_valley = static_cast<std::size_t>(std::lround(s.ridge_x0_km / cell_km - 0.5));
    auto far_enough = [&](std::size_t col, std::size_t row) {
        for (const auto& o : s.settlements) {
            const double dx = (static_cast<double>(col) - static_cast<double>(o.col)) * cell_km;
            const double dy = (static_cast<double>(row) - static_cast<double>(o.row)) * cell_km;
            if (std::hypot(dx, dy) < 3.0) return false;
        }
        return true;
    };

    for (std::size_t q = 0; q < 4; ++q) {
        const bool east = q % 2 == 1;
        const std::size_t c0 = east ? 100 : 0;
        const std::size_t r0 = q < 2 ? 100 : 0;
        RandomStream rng(derive_seed(seed, {q}));
        const std::size_t want = east ? 7 : 6;
        for (std::size_t placed = 0; placed < want;) {
            std::size_t col = c0 + 4 + rng.below(92);
            if (east) {
                const auto k = 1 + rng.below(8);
                col = first_valley + k * valley_step;
            }
            const std::size_t row = r0 + 4 + rng.below(92);
            if (!far_enough(col, row)) continue;
            const double people = std::round(200.0 + 1800.0 * rng.uniform());
            s.settlements.push_back({col, row, people, 1});
            ++placed;
        }
    }
    return s;
}

WorldSpec single_link_spec() {
    WorldSpec s;
    s.ncols = 40;
    s.nrows = 40;
    s.slope_m_per_km = 0.0;
    s.east_vegetation = s.west_vegetation;
    s.east_canopy_m = s.west_canopy_m;
    s.east_rain = s.west_rain;
    s.settlements = {{12, 20, 22500.0, 3}, {28, 20, 500.0, 1}};
    return s;
}

void write_world(const World& w, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    save_ascii_grid(w.dem, dir / "dem.asc");
    save_ascii_grid(w.population, dir / "population.asc");
    save_ascii_grid(w.vegetation, dir / "vegetation.asc");
    save_ascii_grid(w.canopy, dir / "canopy.asc");
    save_ascii_grid(w.admin, dir / "regions.asc");
    CsvTable rain{{"admin_id", "class"}, {}};
    for (const auto& [id, cls] : w.rain) rain.add_row({id, std::string(to_string(cls))});
    write_csv_table(rain, dir / "rain.csv");
}

std::string scenario_json(const std::filesystem::path& output_dir, const std::string& strategy, std::uint64_t seed,
                          const std::string& confidence) {
    nlohmann::json j;
    j["dem"] = "dem.asc";
    j["population"] = "population.asc";
    j["vegetation"] = "vegetation.asc";
    j["canopy"] = "canopy.asc";
    j["regions"] = "regions.asc";
    j["rain_csv"] = "rain.csv";
    j["strategy"] = strategy;
    j["seed"] = seed;
    j["confidence"] = confidence;
    j["curvature"] = true;
    j["repetitions"] = 1;
    j["output_dir"] = output_dir.string();
    return j.dump(2);
}

}  // namespace backhaul
