#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "backhaul/csv.hpp"
#include "backhaul/raster_io.hpp"

namespace backhaul {

struct TerrainTile {
    std::size_t tile_id = 0;
    double x0 = 0.0, y0 = 0.0, x1 = 0.0, y1 = 0.0;
    // Cell ranges, half-open. Rows count from the top of the raster.
    std::size_t col_begin = 0, col_end = 0;
    std::size_t row_begin = 0, row_end = 0;
    double delta_h_m = RasterGrid::missing;  // NaN until computed or when data is insufficient
    int decile = 0;                          // 1..10, 0 when excluded

    bool has_delta_h() const { return !std::isnan(delta_h_m); }
    bool contains_cell(std::size_t col, std::size_t row) const {
        return col >= col_begin && col < col_end && row >= row_begin && row < row_end;
    }
};

// Axis-aligned tiling from the DEM's lower-left corner. A cell belongs to the
// tile containing its centre; boundary tiles are clipped to the DEM extent.
// Tile ids run west to east, then south to north.
std::vector<TerrainTile> partition_tiles(const RasterGrid& dem, double tile_km = 50.0);

// Linear interpolation between order statistics; `p` in [0, 1]. Sorts `values`.
double percentile(std::vector<double>& values, double p);

// p90 - p10 of the tile's valid elevations. Throws MissingDataError with
// fewer than 10 valid cells.
double interdecile_range(const TerrainTile& tile, const RasterGrid& dem);

// Fills delta_h_m for every tile; insufficient tiles stay NaN and are reported.
std::vector<std::string> compute_terrain_irregularity(std::vector<TerrainTile>& tiles, const RasterGrid& dem);

struct DecileAssignment {
    std::vector<TerrainTile> tiles;
    bool degraded = false;  // fewer than 10 valid tiles
    std::vector<std::string> warnings;
};

// Rank valid tiles by (delta_h, tile_id) and cut into ten equal-count groups;
// decile 1 is the least irregular. Tiles without delta_h get decile 0.
DecileAssignment assign_deciles(std::vector<TerrainTile> tiles);

struct LosLookupOptions {
    double tower_m = 30.0;
    double sample_cell_km = 2.5;
    double bin_width_km = 2.5;
    double max_km = 45.0;
    std::size_t tiles_per_decile = 1;
    bool curvature = true;
    double step_m = 0.0;  // profile sampling step; 0 means the DEM cell size
};

class LosLookupTable {
public:
    struct Bin {
        double p_los = RasterGrid::missing;  // NaN when no pair fell in the bin
        std::int64_t n_pairs = 0;
    };

    LosLookupTable(double bin_width_km, double max_km);

    double bin_width_km() const { return bin_width_km_; }
    double max_km() const { return max_km_; }
    std::size_t bin_count() const { return bins_.front().size(); }
    std::size_t bin_index(double distance_km) const;

    Bin& at(int decile, std::size_t bin);
    const Bin& at(int decile, std::size_t bin) const;
    bool row_populated(int decile) const;

    CsvTable to_csv() const;
    static LosLookupTable from_csv(const CsvDocument& doc);

    friend bool operator==(const LosLookupTable& a, const LosLookupTable& b);

private:
    double bin_width_km_;
    double max_km_;
    std::vector<std::vector<Bin>> bins_;  // [decile-1][bin]
};

struct LosLookupBuild {
    LosLookupTable table;
    std::vector<std::vector<std::size_t>> sampled_tiles;  // per decile 1..10
    std::vector<std::size_t> points_per_tile;             // aligned with sampled tile order
    std::vector<std::string> warnings;
};

// One uniform point per sample cell overlaid on the tile from its lower-left
// corner; each cell draws from its own (seed, tile_id, cell) stream.
std::vector<Point> sample_tile_points(const TerrainTile& tile, double cell_km, std::uint64_t seed);

LosLookupBuild build_los_lookup(const std::vector<TerrainTile>& tiles, const RasterGrid& dem, std::uint64_t seed,
                                const LosLookupOptions& options = {});

// Probability of the bin containing distance_km; empty bins fall back to the
// nearest populated bin in the same decile row (lower bin on ties).
double lookup_probability(const LosLookupTable& table, int decile, double distance_km);

}  // namespace backhaul
