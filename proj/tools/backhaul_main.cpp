#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"

#include "backhaul/csv.hpp"
#include "backhaul/errors.hpp"
#include "backhaul/reporting.hpp"
#include "backhaul/scenario.hpp"
#include "backhaul/synthetic_world.hpp"

namespace fs = std::filesystem;
using namespace backhaul;

namespace {

constexpr int exit_ok = 0;
constexpr int exit_config = 2;
constexpr int exit_data = 3;
constexpr int exit_internal = 4;

int exit_code(ErrorClass cls) {
    switch (cls) {
        case ErrorClass::config: return exit_config;
        case ErrorClass::data: return exit_data;
        case ErrorClass::invariant: return exit_internal;
    }
    return exit_internal;
}

void warn_all(const std::vector<std::string>& warnings) {
    for (const auto& w : warnings) std::cerr << "warning: " << w << "\n";
}

ScenarioConfig config_with(const std::string& path, const std::string& out_dir) {
    auto cfg = load_config(path);
    if (!out_dir.empty()) cfg.output_dir = out_dir;
    return cfg;
}

void write_into(const fs::path& dir, const std::string& name, const CsvTable& table) {
    fs::create_directories(dir);
    write_csv_table(table, dir / name);
    std::cout << (dir / name).string() << "\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Wireless backhaul cost simulator: CLOS-only versus hybrid CLOS/NLOS designs"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir;

    auto* pre = app.add_subcommand("preprocess", "terrain tiles, irregularity deciles and the LOS lookup table");
    pre->add_option("-c,--config", config_path, "scenario JSON")->required();
    pre->add_option("-o,--out", out_dir, "override output_dir");

    auto* settle = app.add_subcommand("settlements", "extract settlements from the population raster");
    settle->add_option("-c,--config", config_path, "scenario JSON")->required();
    settle->add_option("-o,--out", out_dir, "override output_dir");

    auto* regions = app.add_subcommand("regions", "build modeling regions");
    regions->add_option("-c,--config", config_path, "scenario JSON")->required();
    regions->add_option("-o,--out", out_dir, "override output_dir");

    std::string strategy;
    std::optional<std::uint64_t> seed;
    std::string confidence;
    auto* assess_cmd = app.add_subcommand("assess", "run the full pipeline for one strategy");
    assess_cmd->add_option("-c,--config", config_path, "scenario JSON")->required();
    assess_cmd->add_option("-o,--out", out_dir, "override output_dir");
    assess_cmd->add_option("--strategy", strategy, "clos or hybrid")->check(CLI::IsMember({"clos", "clos_only", "hybrid"}));
    assess_cmd->add_option("--seed", seed, "random seed");
    assess_cmd->add_option("--confidence", confidence, "p50, p90 or p99")->check(CLI::IsMember({"p50", "p90", "p99"}));

    std::vector<std::string> compare;
    auto* report = app.add_subcommand("report", "compare a clos run with a hybrid run");
    report->add_option("--compare", compare, "two output directories")->required()->expected(2);
    report->add_option("-o,--out", out_dir, "write savings and decile CSVs here");

    auto* dump = app.add_subcommand("dump-tables", "export the embedded constant tables");
    dump->add_option("-o,--out", out_dir, "directory for the CSV files; stdout when omitted");

    std::string world_kind = "ridge";
    std::uint64_t world_seed = 7;
    auto* world = app.add_subcommand("make-world", "write a synthetic desk-scale world and scenario.json");
    world->add_option("--kind", world_kind, "ridge, flat or single-link")
        ->check(CLI::IsMember({"ridge", "flat", "single-link"}));
    world->add_option("--seed", world_seed, "settlement layout seed");
    world->add_option("-o,--out", out_dir, "target directory")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? exit_ok : exit_config;
    }

    try {
        if (*pre) {
            const auto cfg = config_with(config_path, out_dir);
            const auto layers = load_layers(cfg);
            const auto result = preprocess(cfg, layers.dem);
            warn_all(result.warnings);
            write_into(cfg.output_dir, "tiles.csv", tiles_table(result.tiles));
            write_into(cfg.output_dir, "los_lookup.csv", result.lookup.to_csv());
        } else if (*settle || *regions) {
            const auto cfg = config_with(config_path, out_dir);
            const auto layers = load_layers(cfg);
            auto tiles = partition_tiles(layers.dem, cfg.tile_km);
            warn_all(compute_terrain_irregularity(tiles, layers.dem));
            const auto deciles = assign_deciles(std::move(tiles));
            warn_all(deciles.warnings);
            const auto demand = build_demand(cfg, layers, deciles.tiles);
            warn_all(demand.regions.warnings);
            write_into(cfg.output_dir, "settlements.csv", settlements_table(demand));
            if (*regions) write_into(cfg.output_dir, "regions.csv", regions_table(demand.regions));
        } else if (*assess_cmd) {
            auto cfg = config_with(config_path, out_dir);
            if (!strategy.empty()) cfg.design.strategy = parse_strategy(strategy);
            if (seed) cfg.design.seed = *seed;
            if (!confidence.empty()) cfg.design.confidence = parse_confidence(confidence);
            const auto result = run_scenario(cfg);
            warn_all(result.warnings);
            std::cout << "strategy " << to_string(cfg.design.strategy) << ": " << result.assessment.costs.size()
                      << " regions, total " << result.assessment.total_usd() << " USD\n";
        } else if (*report) {
            const auto cmp = compare_runs(compare[0], compare[1]);
            if (out_dir.empty()) {
                std::cout << render_csv(cmp.savings.to_csv()) << "\n";
            } else {
                write_into(out_dir, "savings.csv", cmp.savings.to_csv());
                write_into(out_dir, "savings_composition.csv", cmp.savings.composition_csv());
                write_into(out_dir, "deciles_cumulative.csv", cmp.cumulative);
                write_into(out_dir, "deciles_aggregate.csv", cmp.aggregate);
            }
        } else if (*dump) {
            for (const auto& [name, table] : dump_tables()) {
                if (out_dir.empty()) {
                    std::cout << "# " << name << "\n" << render_csv(table) << "\n";
                } else {
                    write_into(out_dir, name, table);
                }
            }
        } else if (*world) {
            WorldSpec spec = world_kind == "single-link" ? single_link_spec() : desk_world_spec(world_kind == "ridge", world_seed);
            write_world(make_world(spec), out_dir);
            std::ofstream(fs::path(out_dir) / "scenario.json") << scenario_json("out", "hybrid", 42) << "\n";
            std::cout << (fs::path(out_dir) / "scenario.json").string() << "\n";
        }
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_code(e.error_class());
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return exit_internal;
    }
    return exit_ok;
}
