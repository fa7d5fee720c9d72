#pragma once

#include <array>
#include <map>
#include <string>
#include <vector>

#include "backhaul/cost_model.hpp"
#include "backhaul/csv.hpp"
#include "backhaul/demand.hpp"

namespace backhaul {

enum class Ranking { population_density, terrain_irregularity };
std::string_view to_string(Ranking r);

// The per-region attributes used to rank regions into deciles.
struct RegionRankKey {
    std::size_t region_id = 0;
    double pop_density_per_km2 = 0.0;
    int mean_decile = 1;
};

RegionRankKey rank_key(const ModelingRegion& region);

// region_id -> decile 1..10. Density ranks descending (decile 1 densest),
// irregularity ascending (decile 1 flattest); ties by region id.
std::map<std::size_t, int> rank_regions(const std::vector<RegionRankKey>& regions, Ranking ranking);

struct DecileCurve {
    Ranking ranking = Ranking::population_density;
    Strategy strategy = Strategy::hybrid;
    std::array<std::size_t, 10> region_count{};
    std::array<CostComposition, 10> per_decile{};
    std::array<Usd, 10> cumulative_usd{};
    std::vector<std::string> warnings;
};

DecileCurve decile_curves(const std::vector<RegionCost>& costs, const std::vector<RegionRankKey>& regions,
                          Ranking ranking);

// Columns: ranking, decile, strategy, regions, cumulative_usd.
void append_cumulative_rows(CsvTable& table, const DecileCurve& curve);
CsvTable cumulative_table();
// Columns: ranking, decile, strategy, regions, one per cost category, total_usd.
void append_aggregate_rows(CsvTable& table, const DecileCurve& curve);
CsvTable aggregate_table();

struct SavingsRow {
    std::size_t region_id = 0;
    Usd clos_usd = 0;
    Usd hybrid_usd = 0;
    Usd savings_usd() const { return clos_usd - hybrid_usd; }
    double savings_pct() const;
};

struct CategoryDelta {
    CostCategory category = CostCategory::radios;
    Usd clos_usd = 0;
    Usd hybrid_usd = 0;
    Usd delta_usd() const { return clos_usd - hybrid_usd; }
};

struct SavingsReport {
    std::vector<SavingsRow> regions;
    SavingsRow total;
    std::vector<CategoryDelta> composition;

    CsvTable to_csv() const;             // per region plus a "total" row
    CsvTable composition_csv() const;
};

// Both sides must cover the same regions. Throws StructuralError otherwise.
SavingsReport savings_report(const std::vector<RegionCost>& clos, const std::vector<RegionCost>& hybrid);

// Embedded constant tables, keyed by output file name.
std::map<std::string, CsvTable> dump_tables();

// Costs CSV rendering and parsing (used by `report --compare`).
CsvTable costs_table(const std::vector<RegionCost>& costs);
std::vector<RegionCost> parse_costs_table(const CsvDocument& doc);

}  // namespace backhaul
