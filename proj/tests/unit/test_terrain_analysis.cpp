#include <cmath>
#include <sstream>

#include <gtest/gtest.h>

#include "backhaul/errors.hpp"
#include "backhaul/random.hpp"
#include "backhaul/terrain_analysis.hpp"
#include "oracles.hpp"

using namespace backhaul;

namespace {

RasterGrid grid(std::size_t nc, std::size_t nr, double cell, std::vector<double> v) {
    GridHeader h;
    h.ncols = nc;
    h.nrows = nr;
    h.cellsize = cell;
    return RasterGrid(h, LayerKind::elevation_m, std::move(v));
}

}  // namespace

TEST(Tiles, PartitionCoversEveryCellOnce) {
    // 23 x 17 cells of 5 km: 115 x 85 km -> 3 x 2 tiles, clipped at the edge
    const auto dem = grid(23, 17, 5000.0, std::vector<double>(23 * 17, 0.0));
    const auto tiles = partition_tiles(dem, 50.0);
    ASSERT_EQ(tiles.size(), 6u);
    std::vector<int> hits(23 * 17, 0);
    for (const auto& t : tiles) {
        for (std::size_t r = t.row_begin; r < t.row_end; ++r) {
            for (std::size_t c = t.col_begin; c < t.col_end; ++c) ++hits[r * 23 + c];
        }
    }
    for (int h : hits) EXPECT_EQ(h, 1);
    EXPECT_EQ(tiles[0].x0, 0.0);
    EXPECT_EQ(tiles[2].x1, 115000.0);
    EXPECT_EQ(tiles[3].y0, 50000.0);
    // tile 0 is the south-west tile: bottom rows of the raster
    EXPECT_EQ(tiles[0].row_end, 17u);
}

TEST(Tiles, CellBelongsToTileHoldingItsCentre) {
    // 3 km cells: column 16 spans 48-51 km with centre 49.5 -> first tile
    const auto dem = grid(20, 1, 3000.0, std::vector<double>(20, 0.0));
    const auto tiles = partition_tiles(dem, 50.0);
    EXPECT_EQ(tiles[0].col_end, 17u);
    EXPECT_EQ(tiles[1].col_begin, 17u);
}

TEST(Percentile, MatchesOracle) {
    RandomStream rng(2);
    for (int t = 0; t < 300; ++t) {
        std::vector<double> v(1 + rng.below(60));
        for (auto& x : v) x = rng.uniform(-50.0, 500.0);
        const double p = rng.uniform();
        auto copy = v;
        EXPECT_NEAR(percentile(copy, p), oracle::percentile(v, p), 1e-9);
    }
}

TEST(Irregularity, InterdecileOfRamp) {
    // elevations 0..99: p90 = 89.1, p10 = 9.9
    std::vector<double> v(100);
    for (std::size_t i = 0; i < 100; ++i) v[i] = static_cast<double>(i);
    const auto dem = grid(10, 10, 100.0, v);
    const auto tiles = partition_tiles(dem, 50.0);
    ASSERT_EQ(tiles.size(), 1u);
    EXPECT_NEAR(interdecile_range(tiles[0], dem), 79.2, 1e-9);
}

TEST(Irregularity, FlatTileIsZeroAndSparseTileMissing) {
    std::vector<double> v(16, 42.0);
    for (std::size_t i = 0; i < 8; ++i) v[i] = RasterGrid::missing;
    const auto dem = grid(4, 4, 100.0, v);
    auto tiles = partition_tiles(dem, 50.0);
    EXPECT_THROW(interdecile_range(tiles[0], dem), MissingDataError);
    const auto warnings = compute_terrain_irregularity(tiles, dem);
    EXPECT_EQ(warnings.size(), 1u);
    EXPECT_FALSE(tiles[0].has_delta_h());

    const auto flat = grid(4, 4, 100.0, std::vector<double>(16, 7.0));
    EXPECT_EQ(interdecile_range(partition_tiles(flat, 50.0)[0], flat), 0.0);
}

TEST(Deciles, EqualCountGroups) {
    std::vector<TerrainTile> tiles(25);
    for (std::size_t i = 0; i < tiles.size(); ++i) {
        tiles[i].tile_id = i;
        tiles[i].delta_h_m = static_cast<double>((i * 7) % 25);
    }
    const auto out = assign_deciles(tiles);
    EXPECT_FALSE(out.degraded);
    std::vector<int> count(11, 0);
    for (const auto& t : out.tiles) {
        ++count[static_cast<std::size_t>(t.decile)];
        // rank r -> r*10/25 + 1
        EXPECT_EQ(t.decile, static_cast<int>(t.delta_h_m) * 10 / 25 + 1);
    }
    for (int d = 1; d <= 10; ++d) EXPECT_GE(count[static_cast<std::size_t>(d)], 2);
}

TEST(Deciles, TiesByTileIdAndMissingExcluded) {
    std::vector<TerrainTile> tiles(12);
    for (std::size_t i = 0; i < tiles.size(); ++i) {
        tiles[i].tile_id = i;
        tiles[i].delta_h_m = 5.0;
    }
    tiles[3].delta_h_m = RasterGrid::missing;
    const auto out = assign_deciles(tiles);
    EXPECT_EQ(out.tiles[3].decile, 0);
    EXPECT_EQ(out.tiles[0].decile, 1);
    EXPECT_EQ(out.tiles[11].decile, 10);
    for (std::size_t i = 1; i < tiles.size(); ++i) {
        if (i == 3 || i == 4) continue;
        EXPECT_LE(out.tiles[i - 1].decile, out.tiles[i].decile);
    }
}

TEST(Deciles, FewTilesAreDegraded) {
    std::vector<TerrainTile> tiles(4);
    for (std::size_t i = 0; i < 4; ++i) {
        tiles[i].tile_id = i;
        tiles[i].delta_h_m = static_cast<double>(4 - i);
    }
    const auto out = assign_deciles(tiles);
    EXPECT_TRUE(out.degraded);
    EXPECT_EQ(out.tiles[3].decile, 1);
    EXPECT_EQ(out.tiles[0].decile, 8);
}

TEST(LosLookup, SamplePointsStayInTheirCells) {
    TerrainTile t;
    t.tile_id = 3;
    t.x0 = 0.0;
    t.y0 = 0.0;
    t.x1 = 50000.0;
    t.y1 = 50000.0;
    const auto pts = sample_tile_points(t, 2.5, 42);
    ASSERT_EQ(pts.size(), 400u);
    for (std::size_t k = 0; k < pts.size(); ++k) {
        const double cx = static_cast<double>(k % 20) * 2500.0;
        const double cy = static_cast<double>(k / 20) * 2500.0;
        EXPECT_GE(pts[k].x, cx);
        EXPECT_LT(pts[k].x, cx + 2500.0);
        EXPECT_GE(pts[k].y, cy);
        EXPECT_LT(pts[k].y, cy + 2500.0);
    }
    EXPECT_EQ(pts, sample_tile_points(t, 2.5, 42));
    EXPECT_NE(pts, sample_tile_points(t, 2.5, 43));
}

TEST(LosLookup, FlatWorldIsAlwaysVisible) {
    const auto dem = grid(60, 60, 500.0, std::vector<double>(3600, 100.0));
    auto tiles = partition_tiles(dem, 50.0);
    compute_terrain_irregularity(tiles, dem);
    const auto d = assign_deciles(tiles);
    const auto build = build_los_lookup(d.tiles, dem, 1);
    for (int dec = 1; dec <= 10; ++dec) {
        for (std::size_t b = 0; b < build.table.bin_count(); ++b) {
            const double p = build.table.at(dec, b).p_los;
            if (!std::isnan(p)) EXPECT_EQ(p, 1.0);
        }
        EXPECT_EQ(lookup_probability(build.table, dec, 7.0), 1.0);
    }
}

TEST(LosLookup, DeterministicAndCsvRoundTrip) {
    std::vector<double> v(80 * 80);
    RandomStream rng(8);
    for (auto& x : v) x = rng.uniform(0.0, 150.0);
    const auto dem = grid(80, 80, 500.0, v);
    auto tiles = partition_tiles(dem, 20.0);
    compute_terrain_irregularity(tiles, dem);
    const auto d = assign_deciles(tiles);
    const auto a = build_los_lookup(d.tiles, dem, 5);
    const auto b = build_los_lookup(d.tiles, dem, 5);
    EXPECT_TRUE(a.table == b.table);

    std::istringstream in(render_csv(a.table.to_csv()));
    const auto back = LosLookupTable::from_csv(parse_csv(in));
    EXPECT_TRUE(back == a.table);
}

TEST(LosLookup, EmptyBinFallsBackToNearest) {
    LosLookupTable t(2.5, 45.0);
    t.at(4, 2).p_los = 0.4;
    t.at(4, 6).p_los = 0.8;
    EXPECT_EQ(lookup_probability(t, 4, 6.0), 0.4);
    EXPECT_EQ(lookup_probability(t, 4, 0.1), 0.4);
    EXPECT_EQ(lookup_probability(t, 4, 40.0), 0.8);
    // bins 3 and 5 are equidistant from 4: the lower wins
    EXPECT_EQ(lookup_probability(t, 4, 11.0), 0.4);
    EXPECT_THROW(lookup_probability(t, 5, 3.0), LookupError);
    EXPECT_THROW(lookup_probability(t, 4, 46.0), RangeError);
    EXPECT_THROW(t.at(11, 0), RangeError);
}

TEST(LosLookup, BinEdges) {
    LosLookupTable t(2.5, 45.0);
    EXPECT_EQ(t.bin_count(), 18u);
    EXPECT_EQ(t.bin_index(0.0), 0u);
    EXPECT_EQ(t.bin_index(2.5), 1u);
    EXPECT_EQ(t.bin_index(45.0), 17u);
}
