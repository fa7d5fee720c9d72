#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "backhaul/link_budget.hpp"
#include "backhaul/network_design.hpp"
#include "backhaul/raster_io.hpp"

namespace backhaul {

using Usd = std::int64_t;

// Unit prices, 2021 USD.
struct CostItemTable {
    static constexpr Usd radio_pair_usd = 6000;
    // Antenna pair by link distance: [0,10) [10,20) [20,30) [30,45].
    static constexpr std::array<double, 5> antenna_edges_km = {0.0, 10.0, 20.0, 30.0, 45.0};
    static constexpr std::array<Usd, 4> antenna_pair_usd = {1200, 2200, 3600, 4460};
    static constexpr std::array<const char*, 4> antenna_labels = {"Two 0.6 m PtP parabolic antennas",
                                                                  "Two 0.9 m PtP parabolic antennas",
                                                                  "Two 1.2 m PtP parabolic antennas",
                                                                  "Two 1.8 m PtP parabolic antennas"};
    static constexpr Usd tower_usd_per_10m = 10000;
    static constexpr Usd planning_per_site_usd = 8700;
    static constexpr Usd power_per_site_usd = 12000;
};

inline constexpr double foliage_threshold = 0.20;
inline constexpr double antenna_mount_m = 1.0;

enum class TowerPricing { sections, pro_rata };

// Canopy (only when vegetation cover exceeds 20%) + Fresnel clearance + 1 m mount.
double required_tower_height(double veg_fraction, double canopy_m, double distance_km, double frequency_ghz,
                             Confidence confidence);

// Whole 10 m sections by default; pro-rata rounds to the nearest dollar.
Usd tower_cost(double height_m, TowerPricing pricing = TowerPricing::sections);
Usd antenna_pair_cost(double distance_km);

enum class CostCategory { radios, antennas, towers, planning, power };
inline constexpr std::array<CostCategory, 5> all_cost_categories = {
    CostCategory::radios, CostCategory::antennas, CostCategory::towers, CostCategory::planning, CostCategory::power};
std::string_view to_string(CostCategory c);

struct CostComposition {
    Usd radios_usd = 0;
    Usd antennas_usd = 0;
    Usd towers_usd = 0;
    Usd planning_usd = 0;
    Usd power_usd = 0;

    Usd total() const { return radios_usd + antennas_usd + towers_usd + planning_usd + power_usd; }
    Usd get(CostCategory c) const;
    CostComposition& operator+=(const CostComposition& o);
};

struct SiteCost {
    std::size_t site_id = 0;
    double tower_height_m = 0.0;
    Usd tower_usd = 0;
    Usd planning_usd = 0;
    Usd power_usd = 0;

    Usd total() const { return tower_usd + planning_usd + power_usd; }
};

struct LinkCost {
    std::size_t link_index = 0;
    Usd radios_usd = 0;
    Usd antennas_usd = 0;
    std::vector<SiteCost> new_site_costs;  // sites first used by this link
    Usd total_usd = 0;
};

struct RegionCost {
    std::size_t region_id = 0;
    Strategy strategy = Strategy::hybrid;
    std::size_t links = 0;
    std::size_t relays = 0;
    std::size_t towers = 0;
    CostComposition composition;
    std::vector<LinkCost> link_costs;

    Usd total_usd() const { return composition.total(); }
};

struct CostInputs {
    const RasterGrid* vegetation = nullptr;
    const RasterGrid* canopy = nullptr;
    double region_mean_canopy_m = RasterGrid::missing;
    std::map<std::size_t, Point> site_locations;  // settlements and relays
    Confidence confidence = Confidence::p90;
    TowerPricing pricing = TowerPricing::sections;
};

struct RegionCostResult {
    RegionCost cost;
    std::vector<std::string> warnings;
};

// Per link: radio pair + antenna pair. Per site with at least one link:
// tower sized for its most demanding incident link, planning and power,
// each counted once however many links share the site.
RegionCostResult cost_region(const RegionPlan& plan, Strategy strategy, const CostInputs& inputs);

// Mean of the valid canopy cells inside the given admin areas.
double region_mean_canopy(const RasterGrid& canopy, const RasterGrid& admin, const std::set<std::int64_t>& members);

}  // namespace backhaul
