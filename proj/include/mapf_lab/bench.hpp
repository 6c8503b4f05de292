#pragma once

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "mapf_lab/grid_map.hpp"
#include "mapf_lab/solver.hpp"

namespace mapf_lab {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct MapEntry {
    std::filesystem::path path;
    std::string group;
    /// Per-map escalation cap; tighter of this and ExperimentConfig::max_agents applies.
    std::optional<int> max_agents;
    friend bool operator==(const MapEntry&, const MapEntry&) = default;
};

struct ExperimentConfig {
    std::vector<MapEntry> maps;
    std::vector<int> resolutions{1, 2, 4};
    int scenarios_per_map = 5;
    int agent_base = 4;
    int agent_increment = 4;
    std::chrono::milliseconds time_limit{60'000};
    /// Optional cap on high-level expansions per instance.
    std::optional<std::size_t> node_limit;
    /// Escalation never goes past this many agents.
    std::optional<int> max_agents;
    std::vector<Strategy> strategies{Strategy::MotionCBS, Strategy::PriorityCBSwP};
    std::uint64_t seed = 1;
    /// Where `<map>-even-<k>.scen` files live. Empty: `<map dir>/../scen`, then the map's directory.
    std::filesystem::path scen_dir;
    std::filesystem::path out_dir = "bench_out";
    unsigned workers = 1;
    bool write_plans = true;

    /// 25 scenarios per map and a 15 minute limit.
    static ExperimentConfig paper_scale();
};

/// Throws ConfigError for empty lists, non-positive counts or limits, and unreadable map files.
void validate_config(const ExperimentConfig& config);

/// Line-based `key = value` or a JSON object with the same keys. Relative map paths resolve against
/// the config file's directory, then `data_root`. Throws ConfigError.
ExperimentConfig load_config(const std::filesystem::path& path, const std::filesystem::path& data_root = {});
ExperimentConfig parse_config(const std::string& text, const std::filesystem::path& base_dir,
                              const std::filesystem::path& data_root = {});

/// Group tag guessed from a benchmark map name; "other" when unknown.
std::string infer_group(const std::string& map_name);

/// Distinct passable start and goal cells from the map's largest 4-connected region, in a
/// deterministic order for a given (map, seed). Every passable cell of that region appears once as a
/// start and once as a goal.
std::vector<ScenarioPair> random_scenario(const GridMap& map, std::uint64_t seed);

struct ExperimentRecord {
    std::string map;  // file stem
    std::string group;
    int resolution = 1;
    int scenario = 1;
    int agents = 0;
    Strategy strategy = Strategy::MotionCBS;
    Outcome outcome = Outcome::Infeasible;
    double time_ms = 0.0;
    std::optional<long long> cost;
    std::size_t nodes_expanded = 0;
    friend bool operator==(const ExperimentRecord&, const ExperimentRecord&) = default;
};

inline constexpr const char* kRecordHeader = "map,group,resolution,scenario,agents,strategy,outcome,time_ms,cost,nodes_expanded";

std::string record_to_csv(const ExperimentRecord& r);
/// Throws std::invalid_argument naming the line on malformed input.
std::vector<ExperimentRecord> read_records(std::istream& in);
std::vector<ExperimentRecord> load_records(const std::filesystem::path& path);
void write_records(std::ostream& out, const std::vector<ExperimentRecord>& records);

/// Orders by (map, resolution, scenario, strategy, agents).
void sort_records(std::vector<ExperimentRecord>& records);

using RecordSink = std::function<void(const ExperimentRecord&)>;

/// Runs the escalation protocol for every (map, resolution, scenario, strategy): agent_base agents
/// first, then agent_increment more, until the first non-Solved outcome or the scenario runs out of
/// pairs. Each record is appended to `<out_dir>/<map>.records.csv` as soon as it exists; when all
/// runs finish each file is rewritten in key order. Solved plans go to `<out_dir>/plans/`.
/// Throws ConfigError before any run for bad configs or unreadable inputs.
std::vector<ExperimentRecord> run_experiment(const ExperimentConfig& config, const RecordSink& sink = {});

struct SuccessRate {
    std::string group;
    int resolution = 1;
    Strategy strategy = Strategy::MotionCBS;
    int agents = 0;
    int solved = 0;
    int total = 0;  // scenario chains run for this group, resolution and strategy
    double rate = 0.0;
    friend bool operator==(const SuccessRate&, const SuccessRate&) = default;
};

struct RuntimeSeries {
    std::string group;
    int resolution = 1;
    Strategy strategy = Strategy::MotionCBS;
    std::vector<double> times_ms;  // ascending
    friend bool operator==(const RuntimeSeries&, const RuntimeSeries&) = default;
};

struct CostRatio {
    std::string map;
    std::string group;
    int resolution = 1;
    int scenario = 1;
    int agents = 0;
    long long motion_cost = 0;
    long long priority_cost = 0;
    double ratio = 0.0;  // priority / motion
    friend bool operator==(const CostRatio&, const CostRatio&) = default;
};

struct AggregateMetrics {
    std::vector<SuccessRate> success_rate;
    std::vector<RuntimeSeries> runtime_instances;
    std::vector<CostRatio> cost_ratios;
    friend bool operator==(const AggregateMetrics&, const AggregateMetrics&) = default;
};

struct AggregationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Throws AggregationError on duplicate keys, a map tagged with two groups, or a chain that
/// continues past a failure.
AggregateMetrics aggregate(std::vector<ExperimentRecord> records);

enum class ExportFormat { Csv, Json };

/// JSON: one file with keys success_rate, runtime_instances, cost_ratios. CSV: `path` is a stem and
/// three files `<stem>_success_rate.csv`, `<stem>_runtime_instances.csv`, `<stem>_cost_ratios.csv`
/// are written (runtime rows: one per solved instance). Throws std::runtime_error when unwritable.
void export_metrics(const AggregateMetrics& metrics, ExportFormat format, const std::filesystem::path& path);
AggregateMetrics load_metrics_json(const std::filesystem::path& path);

}  // namespace mapf_lab
