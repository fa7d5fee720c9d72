#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "backhaul/demand.hpp"
#include "backhaul/link_budget.hpp"
#include "backhaul/raster_io.hpp"

namespace backhaul {

// Desk-scale test worlds: aligned rasters and a rain map generated in memory.

struct SettlementSeed {
    std::size_t col = 0;
    std::size_t row = 0;
    double population = 0.0;  // spread evenly over a block x block square
    std::size_t block = 1;    // odd
};

struct WorldSpec {
    std::size_t ncols = 200;
    std::size_t nrows = 200;
    double cellsize_m = 500.0;
    double base_elevation_m = 200.0;
    double slope_m_per_km = 0.3;  // gentle northward rise everywhere

    // North-south ridges east of ridge_x0_km; zero height gives a flat world.
    double ridge_height_m = 0.0;
    double ridge_period_km = 6.0;
    double ridge_half_width_km = 1.5;
    double ridge_x0_km = 50.25;  // a valley centre line

    double admin_block_km = 25.0;
    double background_population = 2.0;  // per cell

    double west_vegetation = 0.10, west_canopy_m = 5.0;
    double east_vegetation = 0.60, east_canopy_m = 12.0;
    RainClass west_rain = RainClass::low;
    RainClass east_rain = RainClass::moderate;

    std::vector<SettlementSeed> settlements;
};

struct World {
    RasterGrid dem;
    RasterGrid population;
    RasterGrid vegetation;
    RasterGrid canopy;
    RasterGrid admin;
    RainMap rain;
};

World make_world(const WorldSpec& spec);

// Four majors at quadrant centres plus 26 minors; minors in the east half sit
// on valley floors. `ridged` selects the valley-and-ridge or the flat variant
// of the same layout.
WorldSpec desk_world_spec(bool ridged, std::uint64_t seed = 7);

// Two settlements exactly 8 km apart on flat, unforested ground.
WorldSpec single_link_spec();

// Writes dem.asc, population.asc, vegetation.asc, canopy.asc, regions.asc and
// rain.csv into `dir`.
void write_world(const World& world, const std::filesystem::path& dir);

// Minimal scenario JSON pointing at the files written by write_world.
std::string scenario_json(const std::filesystem::path& output_dir, const std::string& strategy, std::uint64_t seed,
                          const std::string& confidence = "p90");

}  // namespace backhaul
