#include "backhaul/scenario.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <iomanip>
#include <set>
#include <sstream>

#include "backhaul/errors.hpp"
#include "backhaul/format.hpp"
#include "backhaul/random.hpp"

namespace backhaul {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

const std::set<std::string> known_keys = {
    "dem",           "population",         "vegetation",        "canopy",           "regions",
    "rain_csv",      "los_lookup",         "output_dir",        "strategy",         "seed",
    "confidence",    "curvature",          "repetitions",       "tile_km",          "tower_m",
    "min_segment_km", "sample_cell_km",    "bin_width_km",      "max_lookup_km",    "tiles_per_decile",
    "probabilistic_nlos", "cluster_merge_gap", "tower_pricing", "density_min_per_km2", "population_min",
    "major_min",     "connectivity",       "diffraction_loss_db", "planning_margin_db", "max_deviation_deg"};

template <class F>
auto run_stage(const char* name, F&& f) {
    try {
        return f();
    } catch (const Error& e) {
        throw Error(e.error_class(), std::string(name) + ": " + e.what());
    } catch (const std::exception& e) {
        throw Error(ErrorClass::invariant, std::string(name) + ": " + e.what());
    }
}

// Tracks files written by a run so a failure can take them back.
class OutputSet {
public:
    explicit OutputSet(fs::path dir) : dir_(std::move(dir)) {}

    void csv(const std::string& name, const CsvTable& table) {
        const auto path = dir_ / name;
        written_.push_back(path);
        write_csv_table(table, path);
    }

    void text(const std::string& name, const std::string& body) {
        const auto path = dir_ / name;
        written_.push_back(path);
        std::ofstream out(path, std::ios::binary);
        out << body;
        if (!out) throw IoError("cannot write " + path.string());
    }

    void rollback() noexcept {
        std::error_code ec;
        for (const auto& p : written_) fs::remove(p, ec);
        written_.clear();
    }

    const std::vector<fs::path>& written() const { return written_; }

private:
    fs::path dir_;
    std::vector<fs::path> written_;
};

fs::path resolve(const fs::path& base, const std::string& p) {
    const fs::path path(p);
    return path.is_absolute() ? path : base / path;
}

}  // namespace

void ScenarioConfig::validate() const {
    for (const auto* p : {&dem, &population, &vegetation, &canopy, &regions, &rain_csv}) {
        if (p->empty()) throw ConfigError("a required input path is empty");
        if (!fs::is_regular_file(*p)) throw ConfigError("input file not found: " + p->string());
    }
    if (los_lookup && !fs::is_regular_file(*los_lookup)) {
        throw ConfigError("LOS lookup file not found: " + los_lookup->string());
    }
    if (output_dir.empty()) throw ConfigError("output_dir is required");
    if (!(tile_km > 0.0)) throw ConfigError("tile_km must be positive");
    if (!(lookup.sample_cell_km > 0.0) || !(lookup.bin_width_km > 0.0) || !(lookup.max_km > 0.0)) {
        throw ConfigError("LOS lookup cell, bin width and range must be positive");
    }
    if (lookup.tiles_per_decile < 1) throw ConfigError("tiles_per_decile must be at least 1");
    if (thresholds.connectivity != 4 && thresholds.connectivity != 8) throw ConfigError("connectivity must be 4 or 8");
    design.validate();
}

ScenarioConfig parse_config(const json& j, const fs::path& base_dir) {
    if (!j.is_object()) throw ConfigError("scenario config must be a JSON object");
    for (const auto& [key, _] : j.items()) {
        if (!known_keys.count(key)) throw ConfigError("unknown config key '" + key + "'");
    }
    ScenarioConfig cfg;
    try {
        auto path = [&](const char* key) -> fs::path {
            if (!j.contains(key)) throw ConfigError(std::string("missing config key '") + key + "'");
            return resolve(base_dir, j.at(key).get<std::string>());
        };
        cfg.dem = path("dem");
        cfg.population = path("population");
        cfg.vegetation = path("vegetation");
        cfg.canopy = path("canopy");
        cfg.regions = path("regions");
        cfg.rain_csv = path("rain_csv");
        cfg.output_dir = path("output_dir");
        if (j.contains("los_lookup")) cfg.los_lookup = resolve(base_dir, j.at("los_lookup").get<std::string>());

        auto& d = cfg.design;
        if (j.contains("strategy")) d.strategy = parse_strategy(j.at("strategy").get<std::string>());
        if (j.contains("seed")) d.seed = j.at("seed").get<std::uint64_t>();
        if (j.contains("confidence")) d.confidence = parse_confidence(j.at("confidence").get<std::string>());
        if (j.contains("curvature")) d.curvature = j.at("curvature").get<bool>();
        if (j.contains("repetitions")) d.repetitions = j.at("repetitions").get<std::size_t>();
        if (j.contains("tower_m")) d.tower_m = j.at("tower_m").get<double>();
        if (j.contains("min_segment_km")) d.min_segment_km = j.at("min_segment_km").get<double>();
        if (j.contains("cluster_merge_gap")) d.cluster_merge_gap = j.at("cluster_merge_gap").get<std::size_t>();
        if (j.contains("diffraction_loss_db")) d.margins.diffraction_loss_db = j.at("diffraction_loss_db").get<double>();
        if (j.contains("planning_margin_db")) d.margins.planning_margin_db = j.at("planning_margin_db").get<double>();
        if (j.contains("max_deviation_deg")) d.margins.max_deviation_deg = j.at("max_deviation_deg").get<double>();
        if (j.contains("probabilistic_nlos")) {
            const auto v = j.at("probabilistic_nlos").get<std::string>();
            if (v == "accept") {
                d.probabilistic_nlos = ProbabilisticNlosPolicy::accept;
            } else if (v == "reject") {
                d.probabilistic_nlos = ProbabilisticNlosPolicy::reject;
            } else {
                throw ConfigError("probabilistic_nlos must be accept or reject");
            }
        }

        if (j.contains("tile_km")) cfg.tile_km = j.at("tile_km").get<double>();
        cfg.lookup.tower_m = d.tower_m;
        cfg.lookup.curvature = d.curvature;
        if (j.contains("sample_cell_km")) cfg.lookup.sample_cell_km = j.at("sample_cell_km").get<double>();
        if (j.contains("bin_width_km")) cfg.lookup.bin_width_km = j.at("bin_width_km").get<double>();
        if (j.contains("max_lookup_km")) cfg.lookup.max_km = j.at("max_lookup_km").get<double>();
        if (j.contains("tiles_per_decile")) cfg.lookup.tiles_per_decile = j.at("tiles_per_decile").get<std::size_t>();

        if (j.contains("density_min_per_km2")) cfg.thresholds.density_min_per_km2 = j.at("density_min_per_km2").get<double>();
        if (j.contains("population_min")) cfg.thresholds.population_min = j.at("population_min").get<double>();
        if (j.contains("major_min")) cfg.thresholds.major_min = j.at("major_min").get<double>();
        if (j.contains("connectivity")) cfg.thresholds.connectivity = j.at("connectivity").get<int>();

        if (j.contains("tower_pricing")) {
            const auto v = j.at("tower_pricing").get<std::string>();
            if (v == "sections") {
                cfg.pricing = TowerPricing::sections;
            } else if (v == "pro_rata") {
                cfg.pricing = TowerPricing::pro_rata;
            } else {
                throw ConfigError("tower_pricing must be sections or pro_rata");
            }
        }
    } catch (const json::exception& e) {
        throw ConfigError(std::string("bad config value: ") + e.what());
    } catch (const ParseError& e) {
        throw ConfigError(e.what());
    }
    return cfg;
}

ScenarioConfig load_config(const fs::path& file) {
    std::ifstream in(file);
    if (!in) throw ConfigError("cannot open config " + file.string());
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ConfigError("config " + file.string() + " is not valid JSON: " + e.what());
    }
    auto cfg = parse_config(j, file.parent_path().empty() ? fs::path(".") : file.parent_path());
    cfg.validate();
    return cfg;
}

json config_echo(const ScenarioConfig& cfg) {
    const auto& d = cfg.design;
    json j;
    j["strategy"] = std::string(to_string(d.strategy));
    j["seed"] = d.seed;
    j["confidence"] = std::string(to_string(d.confidence));
    j["curvature"] = d.curvature;
    j["repetitions"] = d.repetitions;
    j["tower_m"] = d.tower_m;
    j["min_segment_km"] = d.min_segment_km;
    j["cluster_merge_gap"] = d.cluster_merge_gap;
    j["diffraction_loss_db"] = d.margins.diffraction_loss_db;
    j["planning_margin_db"] = d.margins.planning_margin_db;
    j["max_deviation_deg"] = d.margins.max_deviation_deg;
    j["probabilistic_nlos"] = d.probabilistic_nlos == ProbabilisticNlosPolicy::accept ? "accept" : "reject";
    j["tile_km"] = cfg.tile_km;
    j["sample_cell_km"] = cfg.lookup.sample_cell_km;
    j["bin_width_km"] = cfg.lookup.bin_width_km;
    j["max_lookup_km"] = cfg.lookup.max_km;
    j["tiles_per_decile"] = cfg.lookup.tiles_per_decile;
    j["density_min_per_km2"] = cfg.thresholds.density_min_per_km2;
    j["population_min"] = cfg.thresholds.population_min;
    j["major_min"] = cfg.thresholds.major_min;
    j["connectivity"] = cfg.thresholds.connectivity;
    j["tower_pricing"] = cfg.pricing == TowerPricing::sections ? "sections" : "pro_rata";
    return j;
}

Layers load_layers(const ScenarioConfig& cfg) {
    Layers l{load_ascii_grid(cfg.dem, LayerKind::elevation_m),
             load_ascii_grid(cfg.population, LayerKind::population_per_cell),
             load_ascii_grid(cfg.vegetation, LayerKind::vegetation_fraction),
             load_ascii_grid(cfg.canopy, LayerKind::canopy_height_m),
             load_ascii_grid(cfg.regions, LayerKind::region_id),
             read_rain_map(cfg.rain_csv)};
    require_aligned(l.dem.header(), l.population.header(), "dem vs population");
    require_aligned(l.dem.header(), l.vegetation.header(), "dem vs vegetation");
    require_aligned(l.dem.header(), l.canopy.header(), "dem vs canopy");
    require_aligned(l.dem.header(), l.admin.header(), "dem vs regions");
    return l;
}

PreprocessResult preprocess(const ScenarioConfig& cfg, const RasterGrid& dem) {
    PreprocessResult out;
    auto tiles = partition_tiles(dem, cfg.tile_km);
    auto w = compute_terrain_irregularity(tiles, dem);
    out.warnings.insert(out.warnings.end(), w.begin(), w.end());
    auto deciles = assign_deciles(std::move(tiles));
    out.tiles = std::move(deciles.tiles);
    out.degraded = deciles.degraded;
    out.warnings.insert(out.warnings.end(), deciles.warnings.begin(), deciles.warnings.end());
    if (cfg.los_lookup) {
        out.lookup = LosLookupTable::from_csv(read_csv(*cfg.los_lookup));
    } else {
        auto build = build_los_lookup(out.tiles, dem, cfg.design.seed, cfg.lookup);
        out.lookup = std::move(build.table);
        out.warnings.insert(out.warnings.end(), build.warnings.begin(), build.warnings.end());
    }
    return out;
}

DemandResult build_demand(const ScenarioConfig& cfg, const Layers& layers, const std::vector<TerrainTile>& tiles) {
    DemandResult out;
    out.settlements = extract_settlements(layers.population, cfg.thresholds);
    out.regions = build_modeling_regions(out.settlements, layers.admin, layers.population, layers.rain, tiles);
    return out;
}

Usd Assessment::total_usd() const {
    Usd sum = 0;
    for (const auto& c : costs) sum += c.total_usd();
    return sum;
}

Assessment assess(const ScenarioConfig& cfg, const StrategyConfig& design, const Layers& layers,
                  const PreprocessResult& pre, const DemandResult& demand) {
    Assessment out;
    IdBases ids{0, demand.settlements.size()};
    for (const auto& region : demand.regions.regions) {
        auto plan = assess_region(region, demand.settlements, layers.dem, pre.lookup, design, ids);

        CostInputs inputs;
        inputs.vegetation = &layers.vegetation;
        inputs.canopy = &layers.canopy;
        inputs.region_mean_canopy_m = region_mean_canopy(layers.canopy, layers.admin, region.member_admin_ids);
        inputs.confidence = design.confidence;
        inputs.pricing = cfg.pricing;
        for (auto id : region.settlements) inputs.site_locations.emplace(id, demand.settlements.at(id).location);
        for (const auto& r : plan.relays) inputs.site_locations.emplace(r.id, r.location);

        auto costed = cost_region(plan, design.strategy, inputs);
        out.warnings.insert(out.warnings.end(), costed.warnings.begin(), costed.warnings.end());
        out.costs.push_back(std::move(costed.cost));
        out.plans.push_back(std::move(plan));
    }
    return out;
}

CsvTable tiles_table(const std::vector<TerrainTile>& tiles) {
    CsvTable t{{"tile_id", "x0", "y0", "x1", "y1", "delta_h_m", "decile"}, {}};
    for (const auto& tile : tiles) {
        t.add_row({static_cast<std::int64_t>(tile.tile_id), tile.x0, tile.y0, tile.x1, tile.y1, tile.delta_h_m,
                   static_cast<std::int64_t>(tile.decile)});
    }
    return t;
}

CsvTable settlements_table(const DemandResult& demand) {
    CsvTable t{{"id", "x", "y", "population", "is_major", "region_id"}, {}};
    for (const auto& s : demand.settlements) {
        const auto region = s.id < demand.regions.settlement_region.size()
                                ? static_cast<std::int64_t>(demand.regions.settlement_region[s.id])
                                : std::int64_t{-1};
        t.add_row({static_cast<std::int64_t>(s.id), s.location.x, s.location.y, s.population,
                   static_cast<std::int64_t>(s.is_major), region});
    }
    return t;
}

CsvTable regions_table(const RegionBuild& regions) {
    CsvTable t{{"region_id", "anchor_id", "rain", "settlements", "area_km2", "pop_density", "mean_decile"}, {}};
    for (const auto& r : regions.regions) {
        t.add_row({static_cast<std::int64_t>(r.region_id), static_cast<std::int64_t>(r.anchor),
                   std::string(to_string(r.rain)), static_cast<std::int64_t>(r.settlements.size()), r.area_km2,
                   r.pop_density_per_km2, static_cast<std::int64_t>(r.mean_decile)});
    }
    return t;
}

CsvTable links_table(const std::vector<RegionPlan>& plans) {
    CsvTable t{{"region_id", "edge_id", "a", "b", "kind", "distance_km", "frequency_ghz", "los_source"}, {}};
    for (const auto& p : plans) {
        for (const auto& l : p.links) {
            t.add_row({static_cast<std::int64_t>(l.region_id), static_cast<std::int64_t>(l.edge_id),
                       static_cast<std::int64_t>(l.a), static_cast<std::int64_t>(l.b), std::string(to_string(l.kind)),
                       l.distance_km, l.frequency_ghz, std::string(to_string(l.los_source))});
        }
    }
    return t;
}

CsvTable relays_table(const std::vector<RegionPlan>& plans) {
    CsvTable t{{"id", "region_id", "x", "y", "parent_edge"}, {}};
    for (const auto& p : plans) {
        for (const auto& r : p.relays) {
            t.add_row({static_cast<std::int64_t>(r.id), static_cast<std::int64_t>(p.region_id), r.location.x,
                       r.location.y, static_cast<std::int64_t>(r.parent_edge)});
        }
    }
    return t;
}

std::string fnv1a64_hex(const std::string& bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    std::ostringstream os;
    os << std::hex << std::setw(16) << std::setfill('0') << h;
    return os.str();
}

std::string file_hash(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot read " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return fnv1a64_hex(buf.str());
}

namespace {

std::vector<RepetitionStat> repetition_stats(const std::vector<std::vector<RegionCost>>& runs) {
    std::vector<RepetitionStat> out;
    if (runs.size() < 2) return out;
    for (std::size_t i = 0; i < runs.front().size(); ++i) {
        RepetitionStat s;
        s.region_id = runs.front()[i].region_id;
        s.runs = runs.size();
        s.min_usd = s.max_usd = runs.front()[i].total_usd();
        double sum = 0.0;
        for (const auto& run : runs) {
            const Usd v = run[i].total_usd();
            sum += static_cast<double>(v);
            s.min_usd = std::min(s.min_usd, v);
            s.max_usd = std::max(s.max_usd, v);
        }
        s.mean_usd = sum / static_cast<double>(runs.size());
        double ss = 0.0;
        for (const auto& run : runs) {
            const double dv = static_cast<double>(run[i].total_usd()) - s.mean_usd;
            ss += dv * dv;
        }
        s.stddev_usd = std::sqrt(ss / static_cast<double>(runs.size()));
        out.push_back(s);
    }
    return out;
}

CsvTable repetitions_table(const std::vector<RepetitionStat>& stats, Strategy strategy) {
    CsvTable t{{"region_id", "strategy", "runs", "mean_usd", "stddev_usd", "min_usd", "max_usd"}, {}};
    for (const auto& s : stats) {
        t.add_row({static_cast<std::int64_t>(s.region_id), std::string(to_string(strategy)),
                   static_cast<std::int64_t>(s.runs), format_fixed(s.mean_usd, 2), format_fixed(s.stddev_usd, 2),
                   s.min_usd, s.max_usd});
    }
    return t;
}

std::vector<RegionRankKey> rank_keys(const RegionBuild& regions) {
    std::vector<RegionRankKey> keys;
    for (const auto& r : regions.regions) keys.push_back(rank_key(r));
    return keys;
}

}  // namespace

ScenarioResult run_scenario(const ScenarioConfig& cfg) {
    run_stage("config", [&] {
        cfg.validate();
        return 0;
    });
    ScenarioResult result;
    std::error_code ec;
    fs::create_directories(cfg.output_dir, ec);
    if (ec) throw IoError("cannot create output directory " + cfg.output_dir.string() + ": " + ec.message());
    OutputSet out(cfg.output_dir);
    try {
        const Layers layers = run_stage("load", [&] { return load_layers(cfg); });

        result.pre = run_stage("preprocess", [&] { return preprocess(cfg, layers.dem); });
        out.csv("tiles.csv", tiles_table(result.pre.tiles));
        out.csv("los_lookup.csv", result.pre.lookup.to_csv());

        result.demand = run_stage("demand", [&] { return build_demand(cfg, layers, result.pre.tiles); });
        out.csv("settlements.csv", settlements_table(result.demand));
        out.csv("regions.csv", regions_table(result.demand.regions));

        result.assessment = run_stage("design", [&] { return assess(cfg, cfg.design, layers, result.pre, result.demand); });
        out.csv("links.csv", links_table(result.assessment.plans));
        out.csv("relays.csv", relays_table(result.assessment.plans));
        out.csv("costs.csv", costs_table(result.assessment.costs));

        if (cfg.design.repetitions > 1) {
            std::vector<std::vector<RegionCost>> runs{result.assessment.costs};
            for (std::size_t rep = 1; rep < cfg.design.repetitions; ++rep) {
                StrategyConfig d = cfg.design;
                d.seed = derive_seed(cfg.design.seed, {rep});
                runs.push_back(run_stage("repetition", [&] { return assess(cfg, d, layers, result.pre, result.demand); }).costs);
            }
            result.repetitions = repetition_stats(runs);
            out.csv("repetitions.csv", repetitions_table(result.repetitions, cfg.design.strategy));
        }

        run_stage("report", [&] {
            const auto keys = rank_keys(result.demand.regions);
            CsvTable cumulative = cumulative_table();
            CsvTable aggregate = aggregate_table();
            for (auto ranking : {Ranking::population_density, Ranking::terrain_irregularity}) {
                const auto curve = decile_curves(result.assessment.costs, keys, ranking);
                append_cumulative_rows(cumulative, curve);
                append_aggregate_rows(aggregate, curve);
                if (ranking == Ranking::population_density) {
                    result.warnings.insert(result.warnings.end(), curve.warnings.begin(), curve.warnings.end());
                }
            }
            out.csv("deciles_cumulative.csv", cumulative);
            out.csv("deciles_aggregate.csv", aggregate);
            return 0;
        });

        json manifest;
        manifest["tool"] = "backhaul";
        manifest["format"] = 1;
        manifest["config"] = config_echo(cfg);
        json inputs;
        auto input = [&](const char* name, const fs::path& p) {
            inputs[name] = {{"file", p.filename().string()}, {"fnv1a64", file_hash(p)}};
        };
        input("dem", cfg.dem);
        input("population", cfg.population);
        input("vegetation", cfg.vegetation);
        input("canopy", cfg.canopy);
        input("regions", cfg.regions);
        input("rain_csv", cfg.rain_csv);
        if (cfg.los_lookup) input("los_lookup", *cfg.los_lookup);
        manifest["inputs"] = inputs;
        json tables;
        for (const auto& [name, table] : dump_tables()) tables[name] = fnv1a64_hex(render_csv(table));
        manifest["tables"] = tables;
        json outputs;
        for (const auto& p : out.written()) outputs[p.filename().string()] = file_hash(p);
        manifest["outputs"] = outputs;
        out.text("manifest.json", manifest.dump(2) + "\n");
        result.manifest = std::move(manifest);
    } catch (...) {
        out.rollback();
        throw;
    }

    result.written = out.written();
    auto add = [&](const std::vector<std::string>& w) { result.warnings.insert(result.warnings.end(), w.begin(), w.end()); };
    add(result.pre.warnings);
    add(result.demand.regions.warnings);
    add(result.assessment.warnings);
    return result;
}

std::vector<std::string> manifest_diff(const json& a, const json& b) {
    const json fa = a.flatten();
    const json fb = b.flatten();
    std::set<std::string> keys;
    for (const auto& [k, _] : fa.items()) keys.insert(k);
    for (const auto& [k, _] : fb.items()) keys.insert(k);
    std::vector<std::string> diff;
    for (const auto& k : keys) {
        if (k == "/config/strategy" || k.rfind("/outputs/", 0) == 0) continue;
        const std::string va = fa.contains(k) ? fa.at(k).dump() : "<absent>";
        const std::string vb = fb.contains(k) ? fb.at(k).dump() : "<absent>";
        if (va != vb) diff.push_back(k + ": " + va + " != " + vb);
    }
    return diff;
}

Comparison compare_runs(const fs::path& clos_dir, const fs::path& hybrid_dir) {
    auto read_manifest = [](const fs::path& dir) {
        std::ifstream in(dir / "manifest.json");
        if (!in) throw IoError("no manifest.json in " + dir.string());
        try {
            return json::parse(in);
        } catch (const json::exception& e) {
            throw ParseError("malformed manifest in " + dir.string() + ": " + e.what());
        }
    };
    const json ma = read_manifest(clos_dir);
    const json mb = read_manifest(hybrid_dir);
    const auto diff = manifest_diff(ma, mb);
    if (!diff.empty()) {
        std::string msg = "runs are not comparable; manifests differ:";
        for (const auto& d : diff) msg += "\n  " + d;
        throw ConfigError(msg);
    }
    if (file_hash(clos_dir / "regions.csv") != file_hash(hybrid_dir / "regions.csv")) {
        throw StructuralError("runs disagree on modeling regions");
    }

    auto clos = parse_costs_table(read_csv(clos_dir / "costs.csv"));
    auto hybrid = parse_costs_table(read_csv(hybrid_dir / "costs.csv"));
    auto strategy_of = [](const std::vector<RegionCost>& c) { return c.empty() ? Strategy::hybrid : c.front().strategy; };
    if (strategy_of(clos) == Strategy::hybrid && strategy_of(hybrid) == Strategy::clos_only) std::swap(clos, hybrid);

    Comparison cmp;
    cmp.savings = savings_report(clos, hybrid);

    const auto regions = read_csv(clos_dir / "regions.csv");
    std::vector<RegionRankKey> keys;
    for (const auto& row : regions.rows) {
        RegionRankKey k;
        try {
            k.region_id = static_cast<std::size_t>(std::stoull(row[regions.column("region_id")]));
            k.pop_density_per_km2 = std::stod(row[regions.column("pop_density")]);
            k.mean_decile = std::stoi(row[regions.column("mean_decile")]);
        } catch (const std::logic_error&) {
            throw ParseError("malformed row in regions.csv");
        }
        keys.push_back(k);
    }
    for (auto ranking : {Ranking::population_density, Ranking::terrain_irregularity}) {
        for (const auto* side : {&clos, &hybrid}) {
            const auto curve = decile_curves(*side, keys, ranking);
            append_cumulative_rows(cmp.cumulative, curve);
            append_aggregate_rows(cmp.aggregate, curve);
        }
    }
    return cmp;
}

}  // namespace backhaul
