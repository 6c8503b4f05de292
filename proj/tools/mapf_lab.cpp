#include <CLI11.hpp>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>

#include "mapf_lab/bench.hpp"
#include "mapf_lab/conflict.hpp"
#include "mapf_lab/grid_map.hpp"
#include "mapf_lab/roadmap.hpp"
#include "mapf_lab/serialize.hpp"
#include "mapf_lab/solver.hpp"
#include "mapf_lab/topology.hpp"

using namespace mapf_lab;
namespace fs = std::filesystem;

namespace {

constexpr int kOk = 0;
constexpr int kDomainFailure = 1;
constexpr int kUsage = 2;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

fs::path data_root() {
    const char* env = std::getenv("MAPF_LAB_DATA");
    return env ? fs::path(env) : fs::path();
}

// Tries the path as given, then under $MAPF_LAB_DATA/<sub>/ with and without the extension.
fs::path locate(const std::string& given, const char* sub, const char* ext) {
    const fs::path p(given);
    if (fs::exists(p)) return p;
    const fs::path root = data_root();
    if (!root.empty() && !p.is_absolute()) {
        for (const fs::path& cand : {root / p, root / sub / p, root / sub / (given + ext)})
            if (fs::exists(cand)) return cand;
    }
    throw UsageError("file not found: " + given);
}

std::shared_ptr<const GridRoadmap> roadmap_for(const std::string& map, int resolution) {
    const fs::path path = locate(map, "maps", ".map");
    try {
        auto grid = std::make_shared<const GridMap>(load_map(path.string()));
        return std::make_shared<const GridRoadmap>(build_roadmap(grid, resolution));
    } catch (const std::exception& e) {
        throw UsageError(path.string() + ": " + e.what());
    }
}

int exit_for(Outcome o) { return o == Outcome::Solved ? kOk : kDomainFailure; }

struct SolveArgs {
    std::string map, scen, strategy = "cbs", out;
    std::size_t agents = 4;
    int resolution = 1;
    double time_limit = 60.0;
    std::optional<std::size_t> node_limit;
    std::uint64_t seed = 1;
};

int cmd_solve(const SolveArgs& a) {
    const auto roadmap = roadmap_for(a.map, a.resolution);
    Strategy strategy;
    try {
        strategy = parse_strategy(a.strategy);
    } catch (const std::exception& e) {
        throw UsageError(e.what());
    }
    if (a.time_limit <= 0) throw UsageError("--time-limit must be positive");
    std::vector<ScenarioPair> pairs;
    try {
        pairs = a.scen.empty() ? random_scenario(roadmap->source_map(), a.seed)
                               : load_scenario(locate(a.scen, "scen", ".scen").string(), roadmap->source_map());
    } catch (const UsageError&) {
        throw;
    } catch (const std::exception& e) {
        throw UsageError(e.what());
    }
    if (a.agents == 0 || a.agents > pairs.size())
        throw UsageError("--agents " + std::to_string(a.agents) + " but the scenario has " +
                         std::to_string(pairs.size()) + " pairs");
    ProblemInstance instance;
    try {
        instance = make_instance(roadmap, pairs, a.agents);
    } catch (const std::exception& e) {
        throw UsageError(e.what());
    }
    Budget budget;
    budget.time_limit = std::chrono::milliseconds(static_cast<long long>(a.time_limit * 1000.0));
    budget.node_limit = a.node_limit;
    const SolveResult res = solve(instance, strategy, budget);
    Json j = result_to_json(res, *roadmap);
    j["strategy"] = to_string(strategy);
    j["agents"] = a.agents;
    if (res.plan && !a.out.empty()) write_json_file(a.out, j);
    Json summary = j;
    summary.erase("paths");
    std::cout << summary.dump(2) << '\n';
    return exit_for(res.outcome);
}

struct BenchArgs {
    std::string config, out;
    std::optional<unsigned> workers;
    std::optional<std::uint64_t> seed;
    std::optional<double> time_limit;
};

int cmd_bench(const BenchArgs& a) {
    ExperimentConfig config;
    try {
        config = load_config(a.config, data_root());
        if (!a.out.empty()) config.out_dir = a.out;
        if (a.workers) config.workers = *a.workers;
        if (a.seed) config.seed = *a.seed;
        if (a.time_limit) config.time_limit = std::chrono::milliseconds(static_cast<long long>(*a.time_limit * 1000.0));
        validate_config(config);
    } catch (const ConfigError& e) {
        throw UsageError(e.what());
    }
    std::vector<ExperimentRecord> records;
    try {
        records = run_experiment(config, [](const ExperimentRecord& r) { std::cerr << record_to_csv(r) << '\n'; });
    } catch (const ConfigError& e) {
        throw UsageError(e.what());
    }
    const AggregateMetrics metrics = aggregate(records);
    export_metrics(metrics, ExportFormat::Json, config.out_dir / "aggregate.json");
    export_metrics(metrics, ExportFormat::Csv, config.out_dir / "aggregate");
    std::ofstream all(config.out_dir / "records.csv");
    write_records(all, records);
    std::cout << Json{{"records", records.size()}, {"out_dir", config.out_dir.string()}}.dump() << '\n';
    return kOk;
}

struct TopologyArgs {
    std::string map, out;
    int resolution = 1;
    ClassifierConfig thresholds;
    std::optional<std::size_t> sample;
    std::uint64_t seed = 1;
};

int cmd_topology(const TopologyArgs& a) {
    const auto roadmap = roadmap_for(a.map, a.resolution);
    TopologyOptions opts;
    opts.thresholds = a.thresholds;
    opts.centrality.sample = a.sample;
    opts.centrality.seed = a.seed;
    TopologyReport report;
    try {
        report = analyze_topology(*roadmap, opts);
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
    if (!a.out.empty()) emit_heatmap(*roadmap, report.field, fs::path(a.out));
    const auto& l = report.label;
    std::cout << Json{{"label", to_string(l.label)},
                      {"coefficient_of_variation", l.coefficient_of_variation},
                      {"chain_fraction", l.chain_fraction},
                      {"isolated_fraction", l.isolated_fraction},
                      {"low_cluster_mass", l.low_cluster_mass},
                      {"high_vertices", l.high_vertices},
                      {"component_count", l.component_count},
                      {"classified_vertices", l.classified_vertices}}
                     .dump(2)
              << '\n';
    return kOk;
}

struct ValidateArgs {
    std::string map, plan, scen;
    int resolution = 1;
};

int cmd_validate(const ValidateArgs& a) {
    const auto roadmap = roadmap_for(a.map, a.resolution);
    TeamPlan plan;
    try {
        plan = plan_from_json(read_json_file(locate(a.plan, ".", "")), *roadmap);
    } catch (const UsageError&) {
        throw;
    } catch (const std::exception& e) {
        throw UsageError(e.what());
    }
    ProblemInstance instance;
    instance.roadmap = roadmap;
    if (!a.scen.empty()) {
        try {
            const auto pairs = load_scenario(locate(a.scen, "scen", ".scen").string(), roadmap->source_map());
            instance = make_instance(roadmap, pairs, plan.paths.size());
        } catch (const UsageError&) {
            throw;
        } catch (const std::exception& e) {
            throw UsageError(e.what());
        }
    } else {
        for (const Path& p : plan.paths) instance.tasks.push_back({p.agent, p.states.front(), p.states.back()});
    }
    Json report;
    int code = kOk;
    try {
        const auto conflicts = validate_plan(plan, *roadmap, instance);
        Json list = Json::array();
        for (const Conflict& c : conflicts) list.push_back(conflict_to_json(c));
        report = {{"valid", conflicts.empty()}, {"conflicts", list}};
        if (!conflicts.empty()) code = kDomainFailure;
    } catch (const ValidationError& e) {
        report = {{"valid", false}, {"error", e.what()}, {"conflicts", Json::array()}};
        code = kDomainFailure;
    }
    std::cout << report.dump(2) << '\n';
    return code;
}

int cmd_roadmap(const std::string& map, int resolution, const std::string& out) {
    const auto roadmap = roadmap_for(map, resolution);
    if (!out.empty()) write_json_file(out, roadmap_to_json(*roadmap));
    std::cout << Json{{"resolution", resolution}, {"vertices", roadmap->vertex_count()}, {"edges", roadmap->edge_count()}}
                     .dump()
              << '\n';
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Multi-agent pathfinding lab: constraint-tree search over grid roadmaps"};
    app.require_subcommand(1);

    SolveArgs solve_args;
    auto* solve_cmd = app.add_subcommand("solve", "Solve one instance");
    solve_cmd->add_option("--map", solve_args.map, "MovingAI .map file")->required();
    solve_cmd->add_option("--scen", solve_args.scen, "MovingAI .scen file (default: seeded random pairs)");
    solve_cmd->add_option("--agents", solve_args.agents, "Number of agents (first pairs of the scenario)");
    solve_cmd->add_option("--resolution", solve_args.resolution, "Roadmap resolution")->check(CLI::PositiveNumber);
    solve_cmd->add_option("--strategy", solve_args.strategy, "cbs or cbswp");
    solve_cmd->add_option("--time-limit", solve_args.time_limit, "Seconds");
    solve_cmd->add_option("--node-limit", solve_args.node_limit, "High-level expansions");
    solve_cmd->add_option("--seed", solve_args.seed, "Seed for random pairs");
    solve_cmd->add_option("--out", solve_args.out, "Plan JSON output");

    BenchArgs bench_args;
    auto* bench_cmd = app.add_subcommand("bench", "Run a benchmark suite from a config file");
    bench_cmd->add_option("config,--config", bench_args.config, "key=value or JSON config")->required();
    bench_cmd->add_option("--out", bench_args.out, "Output directory (overrides out_dir)");
    bench_cmd->add_option("--workers", bench_args.workers, "Parallel runs");
    bench_cmd->add_option("--seed", bench_args.seed, "Seed for generated scenarios");
    bench_cmd->add_option("--time-limit", bench_args.time_limit, "Seconds per instance");

    TopologyArgs topo_args;
    auto* topo_cmd = app.add_subcommand("topology", "Betweenness centrality and topology label");
    topo_cmd->add_option("--map", topo_args.map, "MovingAI .map file")->required();
    topo_cmd->add_option("--resolution", topo_args.resolution, "Roadmap resolution")->check(CLI::PositiveNumber);
    topo_cmd->add_option("--out", topo_args.out, "Heatmap CSV output");
    topo_cmd->add_option("--sample", topo_args.sample, "BC source sample size");
    topo_cmd->add_option("--seed", topo_args.seed, "Sampling seed");
    topo_cmd->add_option("--empty-cv", topo_args.thresholds.empty_cv_threshold);
    topo_cmd->add_option("--high", topo_args.thresholds.high_threshold);
    topo_cmd->add_option("--chain-min", topo_args.thresholds.chain_min);
    topo_cmd->add_option("--narrow-fraction", topo_args.thresholds.narrow_fraction);
    topo_cmd->add_option("--low", topo_args.thresholds.low_threshold);
    topo_cmd->add_option("--open-fraction", topo_args.thresholds.open_fraction);

    ValidateArgs val_args;
    auto* val_cmd = app.add_subcommand("validate", "Check a plan for conflicts");
    val_cmd->add_option("--map", val_args.map, "MovingAI .map file")->required();
    val_cmd->add_option("--plan", val_args.plan, "Plan JSON")->required();
    val_cmd->add_option("--resolution", val_args.resolution, "Roadmap resolution")->check(CLI::PositiveNumber);
    val_cmd->add_option("--scen", val_args.scen, "Check endpoints against this scenario");

    std::string rm_map, rm_out;
    int rm_res = 1;
    auto* rm_cmd = app.add_subcommand("roadmap", "Build a roadmap and print or export it");
    rm_cmd->add_option("--map", rm_map, "MovingAI .map file")->required();
    rm_cmd->add_option("--resolution", rm_res, "Roadmap resolution")->check(CLI::PositiveNumber);
    rm_cmd->add_option("--out", rm_out, "Roadmap JSON output");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kUsage;
    }

    try {
        if (*solve_cmd) return cmd_solve(solve_args);
        if (*bench_cmd) return cmd_bench(bench_args);
        if (*topo_cmd) return cmd_topology(topo_args);
        if (*val_cmd) return cmd_validate(val_args);
        if (*rm_cmd) return cmd_roadmap(rm_map, rm_res, rm_out);
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kUsage;
    }
    return kUsage;
}
