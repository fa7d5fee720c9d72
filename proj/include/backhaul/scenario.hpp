#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "backhaul/cost_model.hpp"
#include "backhaul/demand.hpp"
#include "backhaul/network_design.hpp"
#include "backhaul/reporting.hpp"
#include "backhaul/terrain_analysis.hpp"

namespace backhaul {

struct ScenarioConfig {
    std::filesystem::path dem, population, vegetation, canopy, regions, rain_csv;
    std::optional<std::filesystem::path> los_lookup;  // reuse a saved table instead of rebuilding
    std::filesystem::path output_dir;

    StrategyConfig design;  // strategy, seed, confidence, curvature, repetitions, ...
    double tile_km = 50.0;
    LosLookupOptions lookup;
    SettlementThresholds thresholds;
    TowerPricing pricing = TowerPricing::sections;

    // Throws ConfigError for missing files or nonsensical knobs.
    void validate() const;
};

// Relative paths resolve against `base_dir`. Unknown keys are rejected.
ScenarioConfig parse_config(const nlohmann::json& j, const std::filesystem::path& base_dir);
ScenarioConfig load_config(const std::filesystem::path& file);

// Every knob that influences results; the output directory is left out.
nlohmann::json config_echo(const ScenarioConfig& cfg);

struct Layers {
    RasterGrid dem, population, vegetation, canopy, admin;
    RainMap rain;
};

// Loads and cross-checks all inputs. Misaligned rasters throw StructuralError.
Layers load_layers(const ScenarioConfig& cfg);

struct PreprocessResult {
    std::vector<TerrainTile> tiles;
    bool degraded = false;
    LosLookupTable lookup{2.5, 45.0};
    std::vector<std::string> warnings;
};

PreprocessResult preprocess(const ScenarioConfig& cfg, const RasterGrid& dem);

struct DemandResult {
    std::vector<Settlement> settlements;
    RegionBuild regions;
};

DemandResult build_demand(const ScenarioConfig& cfg, const Layers& layers, const std::vector<TerrainTile>& tiles);

struct Assessment {
    std::vector<RegionPlan> plans;
    std::vector<RegionCost> costs;
    std::vector<std::string> warnings;

    Usd total_usd() const;
};

Assessment assess(const ScenarioConfig& cfg, const StrategyConfig& design, const Layers& layers,
                  const PreprocessResult& pre, const DemandResult& demand);

struct RepetitionStat {
    std::size_t region_id = 0;
    std::size_t runs = 0;
    double mean_usd = 0.0;
    double stddev_usd = 0.0;
    Usd min_usd = 0;
    Usd max_usd = 0;
};

struct ScenarioResult {
    PreprocessResult pre;
    DemandResult demand;
    Assessment assessment;
    std::vector<RepetitionStat> repetitions;  // empty when repetitions == 1
    std::vector<std::filesystem::path> written;
    nlohmann::json manifest;
    std::vector<std::string> warnings;
};

// preprocess -> demand -> design -> cost -> report, writing every CSV and
// manifest.json into cfg.output_dir. A failing stage aborts with its name;
// files written so far are removed.
ScenarioResult run_scenario(const ScenarioConfig& cfg);

// Individual table renderers, also used by the partial CLI subcommands.
CsvTable tiles_table(const std::vector<TerrainTile>& tiles);
CsvTable settlements_table(const DemandResult& demand);
CsvTable regions_table(const RegionBuild& regions);
CsvTable links_table(const std::vector<RegionPlan>& plans);
CsvTable relays_table(const std::vector<RegionPlan>& plans);

std::string fnv1a64_hex(const std::string& bytes);
std::string file_hash(const std::filesystem::path& path);

// Differences between two manifests, ignoring the strategy. Each entry reads
// "<json pointer>: <a> != <b>".
std::vector<std::string> manifest_diff(const nlohmann::json& a, const nlohmann::json& b);

// Output of `report --compare`: savings table, composition deltas, and decile
// curves for both strategies. Throws ConfigError carrying the manifest diff
// when the runs are not comparable.
struct Comparison {
    SavingsReport savings;
    CsvTable cumulative = cumulative_table();
    CsvTable aggregate = aggregate_table();
};

Comparison compare_runs(const std::filesystem::path& clos_dir, const std::filesystem::path& hybrid_dir);

}  // namespace backhaul
