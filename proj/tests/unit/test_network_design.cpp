#include <cmath>

#include <gtest/gtest.h>

#include "backhaul/errors.hpp"
#include "backhaul/network_design.hpp"
#include "backhaul/random.hpp"
#include "oracles.hpp"

using namespace backhaul;

namespace {

// 30 km x 2 km strip of 100 m cells at 100 m elevation, optional ridges.
RasterGrid strip(const std::vector<std::pair<double, double>>& ridges = {}) {
    GridHeader h;
    h.ncols = 300;
    h.nrows = 20;
    h.cellsize = 100.0;
    std::vector<double> v(h.ncols * h.nrows, 100.0);
    for (std::size_t r = 0; r < h.nrows; ++r) {
        for (std::size_t c = 0; c < h.ncols; ++c) {
            const double x_km = (static_cast<double>(c) + 0.5) / 10.0;
            for (auto [at_km, height] : ridges) {
                v[r * h.ncols + c] += height * std::max(0.0, 1.0 - std::abs(x_km - at_km) / 0.5);
            }
        }
    }
    return RasterGrid(h, LayerKind::elevation_m, std::move(v));
}

LosLookupTable uniform_lookup(double p) {
    LosLookupTable t(2.5, 45.0);
    for (int d = 1; d <= 10; ++d) {
        for (std::size_t b = 0; b < t.bin_count(); ++b) t.at(d, b).p_los = p;
    }
    return t;
}

ModelingRegion region(RainClass rain = RainClass::low) {
    ModelingRegion r;
    r.rain = rain;
    r.mean_decile = 1;
    return r;
}

EdgePlan plan(const RasterGrid& dem, const LosLookupTable& lookup, const ModelingRegion& reg, const StrategyConfig& cfg,
              double x0_km, double x1_km) {
    std::size_t next = 100;
    const PlanContext ctx{dem, lookup, reg, cfg};
    return plan_edge(0, {0, {x0_km * 1000.0, 1000.0}}, {1, {x1_km * 1000.0, 1000.0}}, ctx, next);
}

StrategyConfig config(Strategy s, std::uint64_t seed = 42) {
    StrategyConfig c;
    c.strategy = s;
    c.seed = seed;
    return c;
}

}  // namespace

TEST(Mst, SmallKnownTree) {
    const std::vector<SiteNode> nodes = {{0, {0, 0}}, {1, {3000, 0}}, {2, {0, 4000}}, {3, {3000, 4000}}};
    const auto g = build_mst(nodes, 0);
    ASSERT_EQ(g.edges.size(), 3u);
    EXPECT_NEAR(g.total_km(), 10.0, 1e-12);
    EXPECT_EQ(g.edges[0].a, 0u);
    EXPECT_EQ(g.edges[0].b, 1u);
}

TEST(Mst, MatchesExhaustiveOracle) {
    RandomStream rng(21);
    for (int inst = 0; inst < 50; ++inst) {
        const std::size_t n = 2 + rng.below(7);
        std::vector<SiteNode> nodes;
        for (std::size_t i = 0; i < n; ++i) nodes.push_back({i, {rng.uniform(0, 50000), rng.uniform(0, 50000)}});
        std::vector<std::vector<double>> w(n, std::vector<double>(n, 0.0));
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) w[i][j] = distance_m(nodes[i].location, nodes[j].location) / 1000.0;
        }
        const auto g = build_mst(nodes, rng.below(n));
        EXPECT_EQ(g.edges.size(), n - 1);
        EXPECT_NEAR(g.total_km(), oracle::mst_weight_exhaustive(w), 1e-9);
    }
}

TEST(Mst, TiesAreDeterministic) {
    // unit square: four equal sides
    const std::vector<SiteNode> nodes = {{0, {0, 0}}, {1, {1000, 0}}, {2, {1000, 1000}}, {3, {0, 1000}}};
    const auto a = build_mst(nodes, 0);
    std::vector<SiteNode> shuffled = {nodes[2], nodes[0], nodes[3], nodes[1]};
    const auto b = build_mst(shuffled, 0);
    ASSERT_EQ(a.edges.size(), b.edges.size());
    for (std::size_t i = 0; i < a.edges.size(); ++i) {
        EXPECT_EQ(a.edges[i].a, b.edges[i].a);
        EXPECT_EQ(a.edges[i].b, b.edges[i].b);
    }
    EXPECT_THROW(build_mst(nodes, 9), ContractViolation);
}

TEST(PlanEdge, ClearEdgeIsOneExplicitClosLink) {
    const auto dem = strip();
    const auto lookup = uniform_lookup(0.0);
    const auto reg = region();
    const auto p = plan(dem, lookup, reg, config(Strategy::clos_only), 1.0, 9.0);
    ASSERT_EQ(p.links.size(), 1u);
    EXPECT_EQ(p.links[0].kind, LinkMode::clos);
    EXPECT_EQ(p.links[0].los_source, LosSource::explicit_viewshed);
    EXPECT_EQ(p.links[0].frequency_ghz, 18.0);
    EXPECT_NEAR(p.links[0].distance_km, 8.0, 1e-12);
    EXPECT_TRUE(p.relays.empty());
}

TEST(PlanEdge, OverLengthEdgeSplitsEvenly) {
    const auto dem = strip();
    const auto lookup = uniform_lookup(1.0);
    const auto reg = region(RainClass::high);  // CLOS cap 15 km
    const auto p = plan(dem, lookup, reg, config(Strategy::clos_only), 0.5, 29.5);
    ASSERT_EQ(p.relays.size(), 1u);
    ASSERT_EQ(p.links.size(), 2u);
    for (const auto& l : p.links) {
        EXPECT_NEAR(l.distance_km, 14.5, 1e-9);
        EXPECT_EQ(l.los_source, LosSource::probabilistic_lookup);
        EXPECT_EQ(l.frequency_ghz, 15.0);
    }
    EXPECT_EQ(p.links[0].b, p.relays[0].id);
    EXPECT_EQ(p.links[1].a, p.relays[0].id);
}

TEST(PlanEdge, SingleRidgeHybridUsesNlos) {
    const auto dem = strip({{5.0, 60.0}});
    const auto lookup = uniform_lookup(0.0);
    const auto reg = region();
    const auto hybrid = plan(dem, lookup, reg, config(Strategy::hybrid), 2.0, 8.0);
    ASSERT_EQ(hybrid.links.size(), 1u);
    EXPECT_EQ(hybrid.links[0].kind, LinkMode::nlos);
    EXPECT_EQ(hybrid.links[0].frequency_ghz, 15.0);
    EXPECT_TRUE(hybrid.relays.empty());

    const auto clos = plan(dem, lookup, reg, config(Strategy::clos_only), 2.0, 8.0);
    EXPECT_FALSE(clos.relays.empty());
    for (const auto& l : clos.links) EXPECT_EQ(l.kind, LinkMode::clos);
}

TEST(PlanEdge, NlosBeyondRainCapFallsBackToRelays) {
    const auto dem = strip({{6.0, 60.0}});
    const auto lookup = uniform_lookup(1.0);
    const auto reg = region(RainClass::high);  // NLOS cap 5 km
    const auto p = plan(dem, lookup, reg, config(Strategy::hybrid), 3.0, 9.0);
    EXPECT_EQ(p.relays.size(), 1u);
    for (const auto& l : p.links) EXPECT_EQ(l.kind, LinkMode::clos);
}

TEST(PlanEdge, ShortBlockedHopIsForcedClos) {
    const auto dem = strip({{5.0, 200.0}});
    const auto lookup = uniform_lookup(0.0);
    const auto reg = region();
    const auto p = plan(dem, lookup, reg, config(Strategy::clos_only), 4.2, 5.8);
    ASSERT_EQ(p.links.size(), 1u);
    EXPECT_EQ(p.links[0].kind, LinkMode::clos);
    EXPECT_TRUE(p.relays.empty());
}

TEST(PlanEdge, RejectPolicyKeepsProbabilisticSegmentsClos) {
    const auto dem = strip({{4.0, 60.0}, {10.0, 60.0}});
    const auto lookup = uniform_lookup(0.0);
    const auto reg = region();
    auto cfg = config(Strategy::hybrid);
    cfg.probabilistic_nlos = ProbabilisticNlosPolicy::reject;
    const auto p = plan(dem, lookup, reg, cfg, 1.0, 13.0);
    for (const auto& l : p.links) EXPECT_EQ(l.kind, LinkMode::clos);
    cfg.probabilistic_nlos = ProbabilisticNlosPolicy::accept;
    const auto q = plan(dem, lookup, reg, cfg, 1.0, 13.0);
    EXPECT_LT(q.relays.size(), p.relays.size());
}

TEST(PlanEdge, Deterministic) {
    const auto dem = strip({{4.0, 60.0}, {10.0, 60.0}, {17.0, 45.0}});
    const auto lookup = uniform_lookup(0.5);
    const auto reg = region();
    const auto a = plan(dem, lookup, reg, config(Strategy::clos_only, 9), 1.0, 25.0);
    const auto b = plan(dem, lookup, reg, config(Strategy::clos_only, 9), 1.0, 25.0);
    ASSERT_EQ(a.links.size(), b.links.size());
    for (std::size_t i = 0; i < a.links.size(); ++i) {
        EXPECT_EQ(a.links[i].a, b.links[i].a);
        EXPECT_EQ(a.links[i].b, b.links[i].b);
        EXPECT_EQ(a.links[i].distance_km, b.links[i].distance_km);
    }
}

TEST(PlanEdgeProperty, HybridNeverNeedsMoreRelays) {
    RandomStream rng(77);
    for (int t = 0; t < 60; ++t) {
        std::vector<std::pair<double, double>> ridges;
        const auto count = rng.below(4);
        for (std::uint64_t i = 0; i < count; ++i) ridges.emplace_back(rng.uniform(2.0, 27.0), rng.uniform(10.0, 120.0));
        const auto dem = strip(ridges);
        const auto lookup = uniform_lookup(rng.uniform());
        const auto reg = region(static_cast<RainClass>(rng.below(3)));
        const double x0 = rng.uniform(0.2, 10.0);
        const double x1 = rng.uniform(x0 + 1.0, 29.8);
        const auto seed = rng.below(1000);
        const auto c = plan(dem, lookup, reg, config(Strategy::clos_only, seed), x0, x1);
        const auto h = plan(dem, lookup, reg, config(Strategy::hybrid, seed), x0, x1);
        EXPECT_LE(h.relays.size(), c.relays.size()) << "trial " << t;
        for (const auto& l : c.links) EXPECT_EQ(l.kind, LinkMode::clos);
    }
}

TEST(AssessRegion, RelayIdsAreDense) {
    const auto dem = strip({{4.0, 60.0}, {10.0, 60.0}});
    const auto lookup = uniform_lookup(0.0);
    auto reg = region();
    reg.settlements = {0, 1, 2};
    reg.anchor = 0;
    const std::vector<Settlement> s = {
        {0, {1000, 1000}, 30000, true}, {1, {13000, 1000}, 500, false}, {2, {25000, 1000}, 500, false}};
    IdBases ids{0, 3};
    const auto p = assess_region(reg, s, dem, lookup, config(Strategy::clos_only), ids);
    EXPECT_EQ(p.edge_ids.size(), 2u);
    for (std::size_t i = 0; i < p.relays.size(); ++i) EXPECT_EQ(p.relays[i].id, 3 + i);
    EXPECT_EQ(ids.next_relay_id, 3 + p.relays.size());
    for (const auto& l : p.links) {
        EXPECT_NE(l.a, l.b);
        EXPECT_LT(l.a, ids.next_relay_id);
        EXPECT_LT(l.b, ids.next_relay_id);
    }
}

TEST(StrategyConfigTest, ParseAndValidate) {
    EXPECT_EQ(parse_strategy("clos"), Strategy::clos_only);
    EXPECT_EQ(parse_strategy("hybrid"), Strategy::hybrid);
    EXPECT_THROW(parse_strategy("nlos"), ConfigError);
    StrategyConfig c;
    c.min_segment_km = 0.0;
    EXPECT_THROW(c.validate(), ConfigError);
}
