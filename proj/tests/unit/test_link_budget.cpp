#include <cmath>

#include <gtest/gtest.h>

#include "backhaul/errors.hpp"
#include "backhaul/link_budget.hpp"
#include "backhaul/random.hpp"

using namespace backhaul;

namespace {

double fspl_reference(double d_km, double f_ghz) {
    // 20log10(d·f) + 32.44 written as one logarithm
    return 20.0 * std::log10(d_km * f_ghz) + 32.44;
}

}  // namespace

TEST(LinkBudget, Eirp) {
    const RadioParams r{30.0, 20.0, 4.0, 20.0, 4.0};
    EXPECT_DOUBLE_EQ(eirp(r), 46.0);
}

TEST(LinkBudget, ReferenceRadioIsTwentyWatts) {
    const auto r = RadioParams::reference();
    EXPECT_NEAR(r.power_dbm, 43.0103, 1e-4);
    EXPECT_NEAR(eirp(r), 59.0103, 1e-4);
}

TEST(LinkBudget, FsplUnitPoint) {
    EXPECT_DOUBLE_EQ(fspl({1.0, 1.0}), 32.44);
}

TEST(LinkBudget, FsplAgainstReference) {
    // direct evaluation: 20log10(180) + 32.44
    EXPECT_NEAR(fspl({10.0, 18.0}), 77.54545, 1e-5);
    EXPECT_NEAR(fspl({45.0, 8.0}), 83.56605, 1e-5);
    RandomStream rng(3);
    for (int i = 0; i < 500; ++i) {
        const double d = rng.uniform(0.01, 100.0);
        const double f = rng.uniform(1.0, 40.0);
        EXPECT_NEAR(fspl({d, f}), fspl_reference(d, f), 1e-9);
    }
}

TEST(LinkBudget, ReceivedPowerExample) {
    // 20 W, 20/4 dB chain both ends, 10 km at 18 GHz
    EXPECT_NEAR(received_power(RadioParams::reference(), {10.0, 18.0}), -2.53515, 1e-4);
}

TEST(LinkBudget, ViabilityThresholdInclusive) {
    EXPECT_TRUE(clos_viable(-55.0));
    EXPECT_TRUE(clos_viable(-54.9));
    EXPECT_FALSE(clos_viable(-55.0001));
}

TEST(LinkBudget, ExtraLossSubtracts) {
    const auto r = RadioParams::reference();
    const NlosMargins m;
    EXPECT_NEAR(received_power(r, {5.0, 18.0}) - received_power(r, {5.0, 18.0}, m.total_extra_loss_db()), 35.0, 1e-12);
}

TEST(LinkBudget, FresnelMaxRadius) {
    EXPECT_DOUBLE_EQ(fresnel_max_radius({8.0, 8.0}), 8.66);
    EXPECT_NEAR(fresnel_max_radius({10.0, 18.0}), 6.454783, 1e-6);
}

TEST(LinkBudget, FresnelRadiusAt) {
    EXPECT_NEAR(fresnel_radius_at({10.0, 18.0}, 5.0), 6.451056, 1e-6);
    EXPECT_NEAR(fresnel_radius_at({10.0, 18.0}, 2.5), 5.586778, 1e-6);
    EXPECT_EQ(fresnel_radius_at({10.0, 18.0}, 0.0), 0.0);
    EXPECT_EQ(fresnel_radius_at({10.0, 18.0}, 10.0), 0.0);
    EXPECT_THROW(fresnel_radius_at({10.0, 18.0}, 10.5), RangeError);
    EXPECT_THROW(fresnel_radius_at({10.0, 18.0}, -0.1), RangeError);
}

TEST(LinkBudget, FresnelMidpointMatchesMaxRadius) {
    RandomStream rng(11);
    for (int i = 0; i < 1000; ++i) {
        const double d = rng.uniform(0.5, 45.0);
        const double f = rng.uniform(6.0, 18.0);
        const double mid = fresnel_radius_at({d, f}, d / 2.0);
        EXPECT_NEAR(mid / fresnel_max_radius({d, f}), 1.0, 1e-3);
    }
}

TEST(LinkBudget, FrequencyRulesClos) {
    EXPECT_EQ(assign_frequency(9.99, LinkMode::clos), 18.0);
    EXPECT_EQ(assign_frequency(10.0, LinkMode::clos), 15.0);
    EXPECT_EQ(assign_frequency(24.99, LinkMode::clos), 15.0);
    EXPECT_EQ(assign_frequency(25.0, LinkMode::clos), 8.0);
    EXPECT_EQ(assign_frequency(45.0, LinkMode::clos), 8.0);
    EXPECT_THROW(assign_frequency(45.01, LinkMode::clos), InfeasibleLinkError);
    EXPECT_THROW(assign_frequency(0.0, LinkMode::clos), RangeError);
}

TEST(LinkBudget, FrequencyRulesNlos) {
    EXPECT_EQ(assign_frequency(4.99, LinkMode::nlos), 18.0);
    EXPECT_EQ(assign_frequency(5.0, LinkMode::nlos), 15.0);
    EXPECT_EQ(assign_frequency(10.0, LinkMode::nlos), 8.0);
    EXPECT_EQ(assign_frequency(15.0, LinkMode::nlos), 8.0);
    EXPECT_THROW(assign_frequency(15.5, LinkMode::nlos), InfeasibleLinkError);
}

TEST(LinkBudget, RainCaps) {
    EXPECT_EQ(max_link_distance(RainClass::high, LinkMode::clos), 15.0);
    EXPECT_EQ(max_link_distance(RainClass::moderate, LinkMode::clos), 30.0);
    EXPECT_EQ(max_link_distance(RainClass::low, LinkMode::clos), 45.0);
    EXPECT_EQ(max_link_distance(RainClass::high, LinkMode::nlos), 5.0);
    EXPECT_EQ(max_link_distance(RainClass::moderate, LinkMode::nlos), 10.0);
    EXPECT_EQ(max_link_distance(RainClass::low, LinkMode::nlos), 15.0);
    EXPECT_EQ(worst_rain(RainClass::low, RainClass::high), RainClass::high);
    EXPECT_EQ(worst_rain(RainClass::moderate, RainClass::low), RainClass::moderate);
}

TEST(LinkBudget, ClearanceLookupCells) {
    EXPECT_EQ(fresnel_clearance_lookup(5.0, 7.0, Confidence::p50), 6.7);
    EXPECT_EQ(fresnel_clearance_lookup(5.0, 7.0, Confidence::p99), 10.4);
    EXPECT_EQ(fresnel_clearance_lookup(8.0, 18.0, Confidence::p50), 4.7);
    EXPECT_EQ(fresnel_clearance_lookup(12.0, 15.0, Confidence::p90), 11.9);
    EXPECT_EQ(fresnel_clearance_lookup(45.0, 8.0, Confidence::p99), 22.4);
    EXPECT_EQ(fresnel_clearance_lookup(30.0, 16.0, Confidence::p90), 13.3);
}

TEST(LinkBudget, ClearanceBucketEdges) {
    EXPECT_EQ(clearance_distance_bucket(9.999), 0u);
    EXPECT_EQ(clearance_distance_bucket(10.0), 1u);
    EXPECT_EQ(clearance_distance_bucket(25.0), 2u);
    EXPECT_EQ(clearance_distance_bucket(45.0), 2u);
    EXPECT_THROW(clearance_distance_bucket(45.1), RangeError);
    EXPECT_THROW(clearance_distance_bucket(0.0), RangeError);
    EXPECT_EQ(clearance_frequency_bucket(15.0), 1u);
    EXPECT_EQ(clearance_frequency_bucket(15.01), 2u);
    EXPECT_THROW(clearance_frequency_bucket(9.0), LookupError);
    EXPECT_THROW(clearance_frequency_bucket(20.0), LookupError);
}

TEST(LinkBudget, ParseEnums) {
    EXPECT_EQ(parse_rain_class("moderate"), RainClass::moderate);
    EXPECT_THROW(parse_rain_class("torrential"), ParseError);
    EXPECT_EQ(parse_confidence("p99"), Confidence::p99);
    EXPECT_THROW(parse_confidence("p75"), ConfigError);
}

TEST(LinkBudgetProperty, ReceivedPowerDecreasesInDistanceAndFrequency) {
    RandomStream rng(17);
    const auto r = RadioParams::reference();
    for (int i = 0; i < 10000; ++i) {
        const double d = rng.uniform(0.1, 45.0);
        const double f = rng.uniform(6.0, 18.0);
        const double dd = rng.uniform(1e-3, 5.0);
        const double df = rng.uniform(1e-3, 2.0);
        ASSERT_GT(received_power(r, {d, f}), received_power(r, {d + dd, f}));
        ASSERT_GT(received_power(r, {d, f}), received_power(r, {d, f + df}));
    }
}
