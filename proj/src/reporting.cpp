#include "backhaul/reporting.hpp"

#include <algorithm>
#include <numeric>
#include <set>

#include "backhaul/errors.hpp"
#include "backhaul/format.hpp"
#include "backhaul/link_budget.hpp"

namespace backhaul {

std::string_view to_string(Ranking r) {
    return r == Ranking::population_density ? "population_density" : "terrain_irregularity";
}

RegionRankKey rank_key(const ModelingRegion& region) {
    return {region.region_id, region.pop_density_per_km2, region.mean_decile};
}

std::map<std::size_t, int> rank_regions(const std::vector<RegionRankKey>& regions, Ranking ranking) {
    std::vector<RegionRankKey> sorted = regions;
    std::sort(sorted.begin(), sorted.end(), [&](const RegionRankKey& a, const RegionRankKey& b) {
        if (ranking == Ranking::population_density) {
            if (a.pop_density_per_km2 != b.pop_density_per_km2) return a.pop_density_per_km2 > b.pop_density_per_km2;
        } else if (a.mean_decile != b.mean_decile) {
            return a.mean_decile < b.mean_decile;
        }
        return a.region_id < b.region_id;
    });
    std::map<std::size_t, int> out;
    const std::size_t n = sorted.size();
    for (std::size_t i = 0; i < n; ++i) out[sorted[i].region_id] = static_cast<int>(i * 10 / n) + 1;
    return out;
}

DecileCurve decile_curves(const std::vector<RegionCost>& costs, const std::vector<RegionRankKey>& regions,
                          Ranking ranking) {
    if (costs.empty()) throw StructuralError("decile curves need at least one costed region");
    DecileCurve curve;
    curve.ranking = ranking;
    curve.strategy = costs.front().strategy;
    if (regions.size() < 10) {
        curve.warnings.push_back("only " + std::to_string(regions.size()) + " regions; some deciles are empty");
    }
    const auto decile_of = rank_regions(regions, ranking);
    for (const auto& c : costs) {
        const auto it = decile_of.find(c.region_id);
        if (it == decile_of.end()) throw StructuralError("costed region " + std::to_string(c.region_id) + " is unknown");
        const auto d = static_cast<std::size_t>(it->second - 1);
        curve.per_decile[d] += c.composition;
        ++curve.region_count[d];
    }
    Usd running = 0;
    for (std::size_t d = 0; d < 10; ++d) {
        running += curve.per_decile[d].total();
        curve.cumulative_usd[d] = running;
    }
    return curve;
}

CsvTable cumulative_table() { return CsvTable{{"ranking", "decile", "strategy", "regions", "cumulative_usd"}, {}}; }

void append_cumulative_rows(CsvTable& table, const DecileCurve& curve) {
    for (std::size_t d = 0; d < 10; ++d) {
        table.add_row({std::string(to_string(curve.ranking)), static_cast<std::int64_t>(d + 1),
                       std::string(to_string(curve.strategy)), static_cast<std::int64_t>(curve.region_count[d]),
                       curve.cumulative_usd[d]});
    }
}

CsvTable aggregate_table() {
    CsvTable t{{"ranking", "decile", "strategy", "regions"}, {}};
    for (auto c : all_cost_categories) t.fields.push_back(std::string(to_string(c)) + "_usd");
    t.fields.push_back("total_usd");
    return t;
}

void append_aggregate_rows(CsvTable& table, const DecileCurve& curve) {
    for (std::size_t d = 0; d < 10; ++d) {
        std::vector<CsvCell> row{std::string(to_string(curve.ranking)), static_cast<std::int64_t>(d + 1),
                                 std::string(to_string(curve.strategy)),
                                 static_cast<std::int64_t>(curve.region_count[d])};
        for (auto c : all_cost_categories) row.emplace_back(curve.per_decile[d].get(c));
        row.emplace_back(curve.per_decile[d].total());
        table.add_row(std::move(row));
    }
}

double SavingsRow::savings_pct() const {
    if (clos_usd == 0) return 0.0;
    return 100.0 * static_cast<double>(savings_usd()) / static_cast<double>(clos_usd);
}

CsvTable SavingsReport::to_csv() const {
    CsvTable t{{"region_id", "clos_usd", "hybrid_usd", "savings_usd", "savings_pct"}, {}};
    for (const auto& r : regions) {
        t.add_row({static_cast<std::int64_t>(r.region_id), r.clos_usd, r.hybrid_usd, r.savings_usd(),
                   format_fixed(r.savings_pct(), 1)});
    }
    t.add_row({std::string("total"), total.clos_usd, total.hybrid_usd, total.savings_usd(),
               format_fixed(total.savings_pct(), 1)});
    return t;
}

CsvTable SavingsReport::composition_csv() const {
    CsvTable t{{"category", "clos_usd", "hybrid_usd", "delta_usd"}, {}};
    for (const auto& c : composition) {
        t.add_row({std::string(to_string(c.category)), c.clos_usd, c.hybrid_usd, c.delta_usd()});
    }
    return t;
}

SavingsReport savings_report(const std::vector<RegionCost>& clos, const std::vector<RegionCost>& hybrid) {
    std::map<std::size_t, const RegionCost*> by_region;
    for (const auto& c : hybrid) by_region[c.region_id] = &c;
    if (by_region.size() != clos.size()) throw StructuralError("strategy results cover different region sets");

    SavingsReport report;
    CostComposition clos_total, hybrid_total;
    for (const auto& c : clos) {
        const auto it = by_region.find(c.region_id);
        if (it == by_region.end()) {
            throw StructuralError("region " + std::to_string(c.region_id) + " missing from the hybrid result");
        }
        report.regions.push_back({c.region_id, c.total_usd(), it->second->total_usd()});
        clos_total += c.composition;
        hybrid_total += it->second->composition;
    }
    std::sort(report.regions.begin(), report.regions.end(),
              [](const SavingsRow& a, const SavingsRow& b) { return a.region_id < b.region_id; });
    for (const auto& r : report.regions) {
        report.total.clos_usd += r.clos_usd;
        report.total.hybrid_usd += r.hybrid_usd;
    }
    for (auto cat : all_cost_categories) report.composition.push_back({cat, clos_total.get(cat), hybrid_total.get(cat)});
    return report;
}

std::map<std::string, CsvTable> dump_tables() {
    std::map<std::string, CsvTable> out;

    CsvTable fresnel{{"distance_km", "frequency_ghz", "p50_m", "p90_m", "p99_m"}, {}};
    for (std::size_t d = 0; d < 3; ++d) {
        for (std::size_t f = 0; f < 3; ++f) {
            const auto& cell = FresnelClearanceTable::metres[d][f];
            fresnel.add_row({std::string(FresnelClearanceTable::distance_labels[d]),
                             std::string(FresnelClearanceTable::frequency_labels[f]), cell[0], cell[1], cell[2]});
        }
    }
    out.emplace("fresnel_clearance.csv", std::move(fresnel));

    CsvTable items{{"item", "caveat", "cost_usd"}, {}};
    items.add_row({std::string("Two PtP radios (all-ODU, high power, licensed bands)"), std::string("-"),
                   CostItemTable::radio_pair_usd});
    static constexpr std::array<const char*, 4> caveats = {"Link distances: <10 km", "Link distances: 10-20 km",
                                                           "Link distances: 20-30 km", "Link distances: 30-45 km"};
    for (std::size_t i = 0; i < 4; ++i) {
        items.add_row({std::string(CostItemTable::antenna_labels[i]), std::string(caveats[i]),
                       CostItemTable::antenna_pair_usd[i]});
    }
    items.add_row({std::string("Tower cost per 10 m in height"), std::string("-"), CostItemTable::tower_usd_per_10m});
    items.add_row({std::string("Network planning, site acquisition and installation"), std::string("-"),
                   CostItemTable::planning_per_site_usd});
    items.add_row({std::string("Single site PV + battery power system"), std::string("-"),
                   CostItemTable::power_per_site_usd});
    out.emplace("cost_items.csv", std::move(items));

    CsvTable freq{{"mode", "distance_lo_km", "distance_hi_km", "frequency_ghz"}, {}};
    freq.add_row({std::string("clos"), 0.0, 10.0, 18.0});
    freq.add_row({std::string("clos"), 10.0, 25.0, 15.0});
    freq.add_row({std::string("clos"), 25.0, 45.0, 8.0});
    freq.add_row({std::string("nlos"), 0.0, 5.0, 18.0});
    freq.add_row({std::string("nlos"), 5.0, 10.0, 15.0});
    freq.add_row({std::string("nlos"), 10.0, 15.0, 8.0});
    out.emplace("frequency_rules.csv", std::move(freq));

    CsvTable rain{{"mode", "high_km", "moderate_km", "low_km"}, {}};
    for (auto mode : {LinkMode::clos, LinkMode::nlos}) {
        rain.add_row({std::string(to_string(mode)), max_link_distance(RainClass::high, mode),
                      max_link_distance(RainClass::moderate, mode), max_link_distance(RainClass::low, mode)});
    }
    out.emplace("rain_caps.csv", std::move(rain));
    return out;
}

CsvTable costs_table(const std::vector<RegionCost>& costs) {
    CsvTable t{{"region_id", "strategy", "links", "relays", "towers"}, {}};
    for (auto c : all_cost_categories) t.fields.push_back(std::string(to_string(c)) + "_usd");
    t.fields.push_back("total_usd");
    for (const auto& c : costs) {
        std::vector<CsvCell> row{static_cast<std::int64_t>(c.region_id), std::string(to_string(c.strategy)),
                                 static_cast<std::int64_t>(c.links), static_cast<std::int64_t>(c.relays),
                                 static_cast<std::int64_t>(c.towers)};
        for (auto cat : all_cost_categories) row.emplace_back(c.composition.get(cat));
        row.emplace_back(c.total_usd());
        t.add_row(std::move(row));
    }
    return t;
}

std::vector<RegionCost> parse_costs_table(const CsvDocument& doc) {
    auto integer = [](const std::string& s) -> std::int64_t {
        try {
            std::size_t used = 0;
            const auto v = std::stoll(s, &used);
            if (used == s.size()) return v;
        } catch (...) {
        }
        throw ParseError("malformed integer '" + s + "' in costs CSV");
    };
    std::vector<RegionCost> out;
    for (const auto& row : doc.rows) {
        RegionCost c;
        c.region_id = static_cast<std::size_t>(integer(row[doc.column("region_id")]));
        c.strategy = parse_strategy(row[doc.column("strategy")]);
        c.links = static_cast<std::size_t>(integer(row[doc.column("links")]));
        c.relays = static_cast<std::size_t>(integer(row[doc.column("relays")]));
        c.towers = static_cast<std::size_t>(integer(row[doc.column("towers")]));
        c.composition.radios_usd = integer(row[doc.column("radios_usd")]);
        c.composition.antennas_usd = integer(row[doc.column("antennas_usd")]);
        c.composition.towers_usd = integer(row[doc.column("towers_usd")]);
        c.composition.planning_usd = integer(row[doc.column("planning_usd")]);
        c.composition.power_usd = integer(row[doc.column("power_usd")]);
        if (integer(row[doc.column("total_usd")]) != c.total_usd()) {
            throw ValidationError("costs CSV total does not equal the sum of its categories for region " +
                                      std::to_string(c.region_id),
                                  0);
        }
        out.push_back(c);
    }
    return out;
}

}  // namespace backhaul
