#include "backhaul/cost_model.hpp"

#include <algorithm>
#include <cmath>

#include "backhaul/errors.hpp"
#include "backhaul/format.hpp"

namespace backhaul {

double required_tower_height(double veg_fraction, double canopy_m, double distance_km, double frequency_ghz,
                             Confidence confidence) {
    const double canopy = veg_fraction > foliage_threshold ? canopy_m : 0.0;
    return canopy + fresnel_clearance_lookup(distance_km, frequency_ghz, confidence) + antenna_mount_m;
}

Usd tower_cost(double height_m, TowerPricing pricing) {
    if (!(height_m > 0.0)) throw RangeError("tower height must be positive, got " + format_number(height_m));
    if (pricing == TowerPricing::pro_rata) {
        return static_cast<Usd>(std::llround(height_m / 10.0 * static_cast<double>(CostItemTable::tower_usd_per_10m)));
    }
    // tolerate float noise such as 30.000000000000004
    const double sections = std::ceil(height_m / 10.0 - 1e-9);
    return static_cast<Usd>(std::max(1.0, sections)) * CostItemTable::tower_usd_per_10m;
}

Usd antenna_pair_cost(double distance_km) {
    if (!(distance_km > 0.0) || distance_km > 45.0) {
        throw RangeError("antenna sizing distance " + format_number(distance_km) + " km outside (0, 45]");
    }
    const auto& edges = CostItemTable::antenna_edges_km;
    for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
        if (distance_km < edges[i + 1]) return CostItemTable::antenna_pair_usd[i];
    }
    return CostItemTable::antenna_pair_usd.back();
}

std::string_view to_string(CostCategory c) {
    switch (c) {
        case CostCategory::radios: return "radios";
        case CostCategory::antennas: return "antennas";
        case CostCategory::towers: return "towers";
        case CostCategory::planning: return "planning";
        case CostCategory::power: return "power";
    }
    return "?";
}

Usd CostComposition::get(CostCategory c) const {
    switch (c) {
        case CostCategory::radios: return radios_usd;
        case CostCategory::antennas: return antennas_usd;
        case CostCategory::towers: return towers_usd;
        case CostCategory::planning: return planning_usd;
        case CostCategory::power: return power_usd;
    }
    return 0;
}

CostComposition& CostComposition::operator+=(const CostComposition& o) {
    radios_usd += o.radios_usd;
    antennas_usd += o.antennas_usd;
    towers_usd += o.towers_usd;
    planning_usd += o.planning_usd;
    power_usd += o.power_usd;
    return *this;
}

RegionCostResult cost_region(const RegionPlan& plan, Strategy strategy, const CostInputs& inputs) {
    RegionCostResult out;
    auto& cost = out.cost;
    cost.region_id = plan.region_id;
    cost.strategy = strategy;
    cost.links = plan.links.size();
    cost.relays = plan.relays.size();

    // site -> required height over all incident links
    std::map<std::size_t, double> height;
    std::map<std::size_t, std::pair<double, double>> foliage;  // site -> (veg, canopy)
    auto site_foliage = [&](std::size_t site) {
        if (auto it = foliage.find(site); it != foliage.end()) return it->second;
        const auto loc = inputs.site_locations.find(site);
        if (loc == inputs.site_locations.end()) {
            throw ContractViolation("site " + std::to_string(site) + " has no known location");
        }
        double veg = 0.0;
        double canopy = 0.0;
        if (inputs.vegetation) {
            if (const auto v = inputs.vegetation->sample_at(loc->second)) {
                veg = *v;
            } else {
                out.warnings.push_back("vegetation nodata at site " + std::to_string(site) + "; assuming no foliage");
            }
        }
        if (veg > foliage_threshold) {
            const auto c = inputs.canopy ? inputs.canopy->sample_at(loc->second) : std::nullopt;
            if (c) {
                canopy = *c;
            } else if (!std::isnan(inputs.region_mean_canopy_m)) {
                canopy = inputs.region_mean_canopy_m;
                out.warnings.push_back("canopy nodata at site " + std::to_string(site) + "; using region mean " +
                                       format_fixed(canopy, 1) + " m");
            } else {
                out.warnings.push_back("canopy nodata at site " + std::to_string(site) +
                                       " and no regional mean; canopy term omitted");
            }
        }
        return foliage.emplace(site, std::pair{veg, canopy}).first->second;
    };
    for (const auto& link : plan.links) {
        for (std::size_t site : {link.a, link.b}) {
            const auto [veg, canopy] = site_foliage(site);
            const double h =
                required_tower_height(veg, canopy, link.distance_km, link.frequency_ghz, inputs.confidence);
            auto [it, inserted] = height.emplace(site, h);
            if (!inserted) it->second = std::max(it->second, h);
        }
    }

    std::set<std::size_t> built;
    for (std::size_t i = 0; i < plan.links.size(); ++i) {
        const auto& link = plan.links[i];
        LinkCost lc;
        lc.link_index = i;
        lc.radios_usd = CostItemTable::radio_pair_usd;
        lc.antennas_usd = antenna_pair_cost(link.distance_km);
        lc.total_usd = lc.radios_usd + lc.antennas_usd;
        cost.composition.radios_usd += lc.radios_usd;
        cost.composition.antennas_usd += lc.antennas_usd;
        for (std::size_t site : {link.a, link.b}) {
            if (!built.insert(site).second) continue;
            SiteCost sc;
            sc.site_id = site;
            sc.tower_height_m = height.at(site);
            sc.tower_usd = tower_cost(sc.tower_height_m, inputs.pricing);
            sc.planning_usd = CostItemTable::planning_per_site_usd;
            sc.power_usd = CostItemTable::power_per_site_usd;
            cost.composition.towers_usd += sc.tower_usd;
            cost.composition.planning_usd += sc.planning_usd;
            cost.composition.power_usd += sc.power_usd;
            lc.total_usd += sc.total();
            lc.new_site_costs.push_back(sc);
        }
        cost.link_costs.push_back(std::move(lc));
    }
    cost.towers = built.size();
    return out;
}

double region_mean_canopy(const RasterGrid& canopy, const RasterGrid& admin, const std::set<std::int64_t>& members) {
    require_aligned(canopy.header(), admin.header(), "canopy vs admin regions");
    double sum = 0.0;
    std::size_t n = 0;
    for (std::size_t r = 0; r < admin.nrows(); ++r) {
        for (std::size_t c = 0; c < admin.ncols(); ++c) {
            if (admin.is_missing(c, r) || canopy.is_missing(c, r)) continue;
            if (!members.count(static_cast<std::int64_t>(admin.at(c, r)))) continue;
            sum += canopy.at(c, r);
            ++n;
        }
    }
    return n ? sum / static_cast<double>(n) : RasterGrid::missing;
}

}  // namespace backhaul
