#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "backhaul/csv.hpp"
#include "backhaul/link_budget.hpp"
#include "backhaul/raster_io.hpp"
#include "backhaul/terrain_analysis.hpp"

namespace backhaul {

struct Settlement {
    std::size_t id = 0;
    Point location;  // population-weighted centroid
    double population = 0.0;
    bool is_major = false;
};

struct SettlementThresholds {
    double density_min_per_km2 = 50.0;  // strict: cells must exceed it
    double population_min = 100.0;      // inclusive
    double major_min = 20000.0;         // strict
    int connectivity = 4;               // 4 or 8
};

// Threshold, label connected components, keep populous ones. Ids follow the
// row-major position of each component's first cell.
std::vector<Settlement> extract_settlements(const RasterGrid& population, const SettlementThresholds& thresholds = {});

using RainMap = std::map<std::int64_t, RainClass>;

// admin_id,class CSV.
RainMap parse_rain_map(const CsvDocument& doc);
RainMap read_rain_map(const std::filesystem::path& path);

struct ModelingRegion {
    std::size_t region_id = 0;
    std::set<std::int64_t> member_admin_ids;
    std::vector<std::size_t> settlements;  // ids, ascending
    std::size_t anchor = 0;                // most populous major settlement
    RainClass rain = RainClass::low;
    double area_km2 = 0.0;
    double population = 0.0;  // population raster total over member areas
    double pop_density_per_km2 = 0.0;
    int mean_decile = 1;
};

struct RegionBuild {
    std::vector<ModelingRegion> regions;
    std::vector<std::size_t> settlement_region;  // indexed by settlement id
    std::vector<std::size_t> nearest_major;      // pre-merge pairing, indexed by settlement id
    std::vector<std::string> warnings;
};

// Cells crossed by the segment a->b (supercover traversal), in order.
std::vector<RasterGrid::CellIndex> rasterize_segment(const GridHeader& grid, Point a, Point b);

// Pairs each minor settlement with its nearest major, merges every admin area
// crossed by the connecting straight line into that major's region, and
// unions overlapping merges transitively.
RegionBuild build_modeling_regions(const std::vector<Settlement>& settlements, const RasterGrid& admin,
                                   const RasterGrid& population, const RainMap& rain,
                                   const std::vector<TerrainTile>& tiles);

}  // namespace backhaul
