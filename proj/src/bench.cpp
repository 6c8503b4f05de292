#include "mapf_lab/bench.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <fstream>
#include <map>
#include <mutex>
#include <numeric>
#include <random>
#include <set>
#include <sstream>
#include <thread>
#include <tuple>

#include "mapf_lab/serialize.hpp"

namespace mapf_lab {

namespace fs = std::filesystem;

ExperimentConfig ExperimentConfig::paper_scale() {
    ExperimentConfig c;
    c.scenarios_per_map = 25;
    c.time_limit = std::chrono::minutes(15);
    return c;
}

void validate_config(const ExperimentConfig& c) {
    if (c.maps.empty()) throw ConfigError("no maps configured");
    if (c.resolutions.empty()) throw ConfigError("no resolutions configured");
    if (c.strategies.empty()) throw ConfigError("no strategies configured");
    for (int r : c.resolutions)
        if (r < 1) throw ConfigError("resolution must be positive, got " + std::to_string(r));
    if (c.scenarios_per_map < 1) throw ConfigError("scenarios_per_map must be positive");
    if (c.agent_base < 1) throw ConfigError("agent_base must be positive");
    if (c.agent_increment < 1) throw ConfigError("agent_increment must be positive");
    if (c.time_limit.count() <= 0) throw ConfigError("time_limit must be positive");
    if (c.node_limit && *c.node_limit == 0) throw ConfigError("node_limit must be positive");
    if (c.max_agents && *c.max_agents < c.agent_base) throw ConfigError("max_agents is below agent_base");
    if (c.workers < 1) throw ConfigError("workers must be positive");
    std::set<std::string> stems;
    for (const MapEntry& m : c.maps) {
        if (m.max_agents && *m.max_agents < c.agent_base)
            throw ConfigError("max_agents for " + m.path.string() + " is below agent_base");
        if (!fs::is_regular_file(m.path)) throw ConfigError("map file not found: " + m.path.string());
        if (!stems.insert(m.path.stem().string()).second)
            throw ConfigError("map listed twice: " + m.path.stem().string());
    }
}

std::string infer_group(const std::string& name) {
    std::string n = name;
    std::transform(n.begin(), n.end(), n.begin(), [](unsigned char ch) { return std::tolower(ch); });
    auto starts = [&](const char* p) { return n.rfind(p, 0) == 0; };
    if (starts("empty")) return "empty";
    if (starts("random")) return "random";
    if (starts("maze") || starts("room")) return "narrow";
    if (starts("berlin") || starts("boston") || starts("paris")) return "cities";
    if (starts("den") || starts("lak") || starts("ost") || starts("brc") || starts("ht_") || starts("lt_") ||
        starts("orz") || starts("w_"))
        return "games";
    return "other";
}

namespace {

std::string trim(std::string s) {
    auto ws = [](unsigned char ch) { return std::isspace(ch) != 0; };
    s.erase(s.begin(), std::find_if_not(s.begin(), s.end(), ws));
    s.erase(std::find_if_not(s.rbegin(), s.rend(), ws).base(), s.end());
    return s;
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream in(s);
    while (std::getline(in, item, ','))
        if (auto t = trim(item); !t.empty()) out.push_back(t);
    return out;
}

fs::path resolve_map(const fs::path& p, const fs::path& base, const fs::path& data_root) {
    if (p.is_absolute()) return p;
    if (fs::exists(base / p)) return base / p;
    if (!data_root.empty()) {
        if (fs::exists(data_root / p)) return data_root / p;
        if (fs::exists(data_root / "maps" / p)) return data_root / "maps" / p;
    }
    return base / p;
}

long long to_integer(const std::string& key, const std::string& v) {
    try {
        std::size_t pos = 0;
        const long long x = std::stoll(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return x;
    } catch (const std::exception&) {
        throw ConfigError(key + ": expected an integer, got '" + v + "'");
    }
}

double to_real(const std::string& key, const std::string& v) {
    try {
        std::size_t pos = 0;
        const double x = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return x;
    } catch (const std::exception&) {
        throw ConfigError(key + ": expected a number, got '" + v + "'");
    }
}

bool to_bool(const std::string& key, const std::string& v) {
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    throw ConfigError(key + ": expected true or false, got '" + v + "'");
}

// Applies one setting given as text; `map` entries are "path" or "path group".
void apply_setting(ExperimentConfig& c, const std::string& key, const std::string& value, const fs::path& base,
                   const fs::path& data_root) {
    if (key == "map") {
        std::istringstream in(value);
        std::string path, group, cap;
        in >> path >> group >> cap;
        if (path.empty()) throw ConfigError("map: missing path");
        const fs::path resolved = resolve_map(path, base, data_root);
        MapEntry entry{resolved, group.empty() ? infer_group(resolved.stem().string()) : group, std::nullopt};
        if (!cap.empty()) entry.max_agents = static_cast<int>(to_integer("map max_agents", cap));
        c.maps.push_back(std::move(entry));
    } else if (key == "resolutions") {
        c.resolutions.clear();
        for (const auto& s : split_list(value)) c.resolutions.push_back(static_cast<int>(to_integer(key, s)));
    } else if (key == "scenarios" || key == "scenarios_per_map") {
        c.scenarios_per_map = static_cast<int>(to_integer(key, value));
    } else if (key == "agent_base") {
        c.agent_base = static_cast<int>(to_integer(key, value));
    } else if (key == "agent_increment") {
        c.agent_increment = static_cast<int>(to_integer(key, value));
    } else if (key == "time_limit" || key == "time_limit_s") {
        c.time_limit = std::chrono::milliseconds(static_cast<long long>(to_real(key, value) * 1000.0));
    } else if (key == "time_limit_ms") {
        c.time_limit = std::chrono::milliseconds(to_integer(key, value));
    } else if (key == "node_limit") {
        const long long n = to_integer(key, value);
        if (n <= 0) throw ConfigError("node_limit must be positive");
        c.node_limit = static_cast<std::size_t>(n);
    } else if (key == "max_agents") {
        c.max_agents = static_cast<int>(to_integer(key, value));
    } else if (key == "strategies") {
        c.strategies.clear();
        for (const auto& s : split_list(value)) {
            try {
                c.strategies.push_back(parse_strategy(s));
            } catch (const std::exception& e) {
                throw ConfigError(std::string("strategies: ") + e.what());
            }
        }
    } else if (key == "seed") {
        c.seed = static_cast<std::uint64_t>(to_integer(key, value));
    } else if (key == "scen_dir") {
        c.scen_dir = fs::path(value).is_absolute() ? fs::path(value) : base / value;
    } else if (key == "out_dir") {
        c.out_dir = fs::path(value).is_absolute() ? fs::path(value) : base / value;
    } else if (key == "workers") {
        c.workers = static_cast<unsigned>(std::max<long long>(0, to_integer(key, value)));
    } else if (key == "write_plans") {
        c.write_plans = to_bool(key, value);
    } else if (key == "paper_scale") {
        if (to_bool(key, value)) {
            const auto paper = ExperimentConfig::paper_scale();
            c.scenarios_per_map = paper.scenarios_per_map;
            c.time_limit = paper.time_limit;
        }
    } else {
        throw ConfigError("unknown config key '" + key + "'");
    }
}

std::string json_scalar(const Json& v) {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_array()) {
        std::string s;
        for (const Json& x : v) s += (s.empty() ? "" : ",") + json_scalar(x);
        return s;
    }
    return v.dump();
}

}  // namespace

ExperimentConfig parse_config(const std::string& text, const fs::path& base, const fs::path& data_root) {
    ExperimentConfig c;
    const auto first = text.find_first_not_of(" \t\r\n");
    if (first != std::string::npos && text[first] == '{') {
        Json j;
        try {
            j = Json::parse(text);
        } catch (const nlohmann::json::parse_error& e) {
            throw ConfigError(std::string("config JSON: ") + e.what());
        }
        // paper_scale first so explicit keys override it
        if (j.contains("paper_scale")) apply_setting(c, "paper_scale", json_scalar(j["paper_scale"]), base, data_root);
        for (const auto& [key, value] : j.items()) {
            if (key == "paper_scale") continue;
            if (key == "maps") {
                if (!value.is_array()) throw ConfigError("maps: expected an array");
                for (const Json& m : value) {
                    if (m.is_string()) {
                        apply_setting(c, "map", m.get<std::string>(), base, data_root);
                    } else if (m.is_object() && m.contains("path")) {
                        std::string group = m.value("group", "");
                        if (group.empty()) group = infer_group(fs::path(m["path"].get<std::string>()).stem().string());
                        std::string line = m["path"].get<std::string>() + " " + group;
                        if (m.contains("max_agents")) line += " " + json_scalar(m["max_agents"]);
                        apply_setting(c, "map", line, base, data_root);
                    } else {
                        throw ConfigError("maps: entries must be paths or {\"path\", \"group\"}");
                    }
                }
            } else {
                apply_setting(c, key, json_scalar(value), base, data_root);
            }
        }
        return c;
    }
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    std::vector<std::pair<std::string, std::string>> entries;
    while (std::getline(in, line)) {
        ++lineno;
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
        entries.emplace_back(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    }
    for (const auto& [k, v] : entries)
        if (k == "paper_scale") apply_setting(c, k, v, base, data_root);
    for (const auto& [k, v] : entries)
        if (k != "paper_scale") apply_setting(c, k, v, base, data_root);
    return c;
}

ExperimentConfig load_config(const fs::path& path, const fs::path& data_root) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str(), path.parent_path(), data_root);
}

std::vector<ScenarioPair> random_scenario(const GridMap& map, std::uint64_t seed) {
    // Largest 4-connected region of passable cells.
    const int w = map.width(), h = map.height();
    std::vector<int> region(static_cast<std::size_t>(w) * static_cast<std::size_t>(h), -1);
    std::vector<std::vector<Cell>> regions;
    for (int r = 0; r < h; ++r)
        for (int col = 0; col < w; ++col) {
            if (!map.passable(col, r) || region[static_cast<std::size_t>(r * w + col)] >= 0) continue;
            const int id = static_cast<int>(regions.size());
            regions.emplace_back();
            std::vector<Cell> stack{{col, r}};
            region[static_cast<std::size_t>(r * w + col)] = id;
            while (!stack.empty()) {
                const Cell c = stack.back();
                stack.pop_back();
                regions.back().push_back(c);
                const Cell next[4] = {{c.col, c.row - 1}, {c.col - 1, c.row}, {c.col + 1, c.row}, {c.col, c.row + 1}};
                for (const Cell& n : next) {
                    if (!map.passable(n.col, n.row)) continue;
                    auto& slot = region[static_cast<std::size_t>(n.row * w + n.col)];
                    if (slot >= 0) continue;
                    slot = id;
                    stack.push_back(n);
                }
            }
        }
    if (regions.empty()) return {};
    auto cells = *std::max_element(regions.begin(), regions.end(),
                                   [](const auto& a, const auto& b) { return a.size() < b.size(); });
    std::sort(cells.begin(), cells.end(), [](const Cell& a, const Cell& b) {
        return std::tie(a.row, a.col) < std::tie(b.row, b.col);
    });
    // std::shuffle's algorithm is implementation-defined; a hand-rolled Fisher-Yates keeps the
    // sequence identical across standard libraries.
    std::mt19937_64 rng(seed);
    auto shuffled = [&](std::vector<Cell> v) {
        for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[rng() % i]);
        return v;
    };
    const auto starts = shuffled(cells);
    const auto goals = shuffled(cells);
    std::vector<ScenarioPair> pairs;
    pairs.reserve(cells.size());
    for (std::size_t i = 0; i < cells.size(); ++i) pairs.push_back({starts[i], goals[i]});
    return pairs;
}

std::string record_to_csv(const ExperimentRecord& r) {
    char time[32];
    std::snprintf(time, sizeof time, "%.3f", r.time_ms);
    std::ostringstream out;
    out << r.map << ',' << r.group << ',' << r.resolution << ',' << r.scenario << ',' << r.agents << ','
        << to_string(r.strategy) << ',' << to_string(r.outcome) << ',' << time << ',';
    if (r.cost) out << *r.cost;
    out << ',' << r.nodes_expanded;
    return out.str();
}

std::vector<ExperimentRecord> read_records(std::istream& in) {
    std::vector<ExperimentRecord> out;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (lineno == 1 && line == kRecordHeader) continue;
        std::vector<std::string> f;
        std::string field;
        std::istringstream ls(line);
        while (std::getline(ls, field, ',')) f.push_back(field);
        if (!line.empty() && line.back() == ',') f.emplace_back();
        const std::string where = "records line " + std::to_string(lineno);
        if (f.size() != 10) throw std::invalid_argument(where + ": expected 10 fields, got " + std::to_string(f.size()));
        try {
            ExperimentRecord r;
            r.map = f[0];
            r.group = f[1];
            r.resolution = std::stoi(f[2]);
            r.scenario = std::stoi(f[3]);
            r.agents = std::stoi(f[4]);
            r.strategy = parse_strategy(f[5]);
            r.outcome = parse_outcome(f[6]);
            r.time_ms = std::stod(f[7]);
            if (!f[8].empty()) r.cost = std::stoll(f[8]);
            r.nodes_expanded = static_cast<std::size_t>(std::stoull(f[9]));
            out.push_back(std::move(r));
        } catch (const std::exception& e) {
            throw std::invalid_argument(where + ": " + e.what());
        }
    }
    return out;
}

std::vector<ExperimentRecord> load_records(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    return read_records(in);
}

void write_records(std::ostream& out, const std::vector<ExperimentRecord>& records) {
    out << kRecordHeader << '\n';
    for (const auto& r : records) out << record_to_csv(r) << '\n';
}

namespace {

auto record_key(const ExperimentRecord& r) {
    return std::make_tuple(r.map, r.resolution, r.scenario, static_cast<int>(r.strategy), r.agents);
}

fs::path scenario_path(const ExperimentConfig& c, const fs::path& map, int k) {
    const std::string name = map.stem().string() + "-even-" + std::to_string(k) + ".scen";
    if (!c.scen_dir.empty()) return c.scen_dir / name;
    const fs::path sibling = map.parent_path().parent_path() / "scen" / name;
    if (fs::exists(sibling)) return sibling;
    return map.parent_path() / name;
}

std::uint64_t name_hash(const std::string& s) {
    std::uint64_t h = 1469598103934665603ull;  // FNV-1a
    for (unsigned char ch : s) h = (h ^ ch) * 1099511628211ull;
    return h;
}

struct Chain {
    std::size_t map;
    int resolution;
    int scenario;
    Strategy strategy;
};

}  // namespace

void sort_records(std::vector<ExperimentRecord>& records) {
    std::sort(records.begin(), records.end(),
              [](const ExperimentRecord& a, const ExperimentRecord& b) { return record_key(a) < record_key(b); });
}

std::vector<ExperimentRecord> run_experiment(const ExperimentConfig& config, const RecordSink& sink) {
    validate_config(config);

    // Load everything up front so bad inputs fail before any run.
    struct MapData {
        std::string name;
        std::string group;
        std::optional<int> max_agents;
        std::shared_ptr<const GridMap> grid;
        std::vector<std::vector<ScenarioPair>> scenarios;  // index k-1
        std::map<int, std::shared_ptr<const GridRoadmap>> roadmaps;
    };
    std::vector<MapData> maps;
    for (const MapEntry& entry : config.maps) {
        MapData d;
        d.name = entry.path.stem().string();
        d.group = entry.group.empty() ? infer_group(d.name) : entry.group;
        d.max_agents = entry.max_agents;
        try {
            d.grid = std::make_shared<const GridMap>(load_map(entry.path.string()));
            for (int k = 1; k <= config.scenarios_per_map; ++k) {
                const fs::path scen = scenario_path(config, entry.path, k);
                if (fs::exists(scen))
                    d.scenarios.push_back(load_scenario(scen.string(), *d.grid));
                else
                    d.scenarios.push_back(random_scenario(*d.grid, config.seed ^ name_hash(d.name) ^
                                                                       (static_cast<std::uint64_t>(k) << 32)));
            }
            for (int r : config.resolutions)
                d.roadmaps.emplace(r, std::make_shared<const GridRoadmap>(build_roadmap(d.grid, r)));
        } catch (const std::exception& e) {
            throw ConfigError(entry.path.string() + ": " + e.what());
        }
        maps.push_back(std::move(d));
    }

    std::error_code ec;
    fs::create_directories(config.out_dir, ec);
    if (config.write_plans) fs::create_directories(config.out_dir / "plans", ec);
    if (!fs::is_directory(config.out_dir)) throw ConfigError("cannot create output directory " + config.out_dir.string());
    for (const MapData& d : maps) {
        std::ofstream out(config.out_dir / (d.name + ".records.csv"), std::ios::trunc);
        if (!out) throw ConfigError("cannot write records for " + d.name);
        out << kRecordHeader << '\n';
    }

    std::vector<Chain> chains;
    for (std::size_t m = 0; m < maps.size(); ++m)
        for (int r : config.resolutions)
            for (int k = 1; k <= config.scenarios_per_map; ++k)
                for (Strategy s : config.strategies) chains.push_back({m, r, k, s});

    std::mutex io;
    std::vector<ExperimentRecord> all;
    auto emit = [&](const ExperimentRecord& rec) {
        std::lock_guard lock(io);
        std::ofstream out(config.out_dir / (rec.map + ".records.csv"), std::ios::app);
        out << record_to_csv(rec) << '\n';
        out.flush();
        all.push_back(rec);
        if (sink) sink(rec);
    };

    auto run_chain = [&](const Chain& ch) {
        const MapData& d = maps[ch.map];
        const auto& roadmap = d.roadmaps.at(ch.resolution);
        const auto& pairs = d.scenarios[static_cast<std::size_t>(ch.scenario - 1)];
        for (int n = config.agent_base;; n += config.agent_increment) {
            if (static_cast<std::size_t>(n) > pairs.size()) break;
            if (config.max_agents && n > *config.max_agents) break;
            if (d.max_agents && n > *d.max_agents) break;
            ProblemInstance instance;
            try {
                instance = make_instance(roadmap, pairs, static_cast<std::size_t>(n));
            } catch (const std::exception& e) {
                std::lock_guard lock(io);
                std::fprintf(stderr, "%s r=%d scenario %d: %d agents: %s\n", d.name.c_str(), ch.resolution,
                             ch.scenario, n, e.what());
                break;
            }
            Budget budget;
            budget.time_limit = config.time_limit;
            budget.node_limit = config.node_limit;
            const auto t0 = std::chrono::steady_clock::now();
            const SolveResult res = solve(instance, ch.strategy, budget);
            const auto t1 = std::chrono::steady_clock::now();

            ExperimentRecord rec;
            rec.map = d.name;
            rec.group = d.group;
            rec.resolution = ch.resolution;
            rec.scenario = ch.scenario;
            rec.agents = n;
            rec.strategy = ch.strategy;
            rec.outcome = res.outcome;
            rec.time_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
            if (res.outcome == Outcome::Solved) rec.cost = res.cost;
            rec.nodes_expanded = res.stats.nodes_expanded;

            if (res.outcome == Outcome::Solved && config.write_plans) {
                Json j = result_to_json(res, *roadmap);
                j["map"] = d.name;
                j["scenario"] = ch.scenario;
                j["agents"] = n;
                j["strategy"] = to_string(ch.strategy);
                const fs::path dir = config.out_dir / "plans" / d.name;
                std::error_code mk;
                fs::create_directories(dir, mk);
                write_json_file(dir / ("r" + std::to_string(ch.resolution) + "_s" + std::to_string(ch.scenario) + "_" +
                                       to_string(ch.strategy) + "_a" + std::to_string(n) + ".json"),
                                j);
            }
            emit(rec);
            if (res.outcome != Outcome::Solved) break;
        }
    };

    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < chains.size(); i = next++) run_chain(chains[i]);
    };
    const unsigned threads = std::min<unsigned>(config.workers, static_cast<unsigned>(std::max<std::size_t>(1, chains.size())));
    if (threads <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }

    sort_records(all);
    for (const MapData& d : maps) {
        std::vector<ExperimentRecord> mine;
        std::copy_if(all.begin(), all.end(), std::back_inserter(mine),
                     [&](const ExperimentRecord& r) { return r.map == d.name; });
        std::ofstream out(config.out_dir / (d.name + ".records.csv"), std::ios::trunc);
        write_records(out, mine);
    }
    return all;
}

AggregateMetrics aggregate(std::vector<ExperimentRecord> records) {
    sort_records(records);
    std::map<std::string, std::string> group_of;
    for (std::size_t i = 0; i < records.size(); ++i) {
        const auto& r = records[i];
        auto [it, fresh] = group_of.emplace(r.map, r.group);
        if (!fresh && it->second != r.group)
            throw AggregationError("map " + r.map + " appears in groups " + it->second + " and " + r.group);
        if (i > 0 && record_key(records[i - 1]) == record_key(r))
            throw AggregationError("duplicate record: " + record_to_csv(r));
        if (i > 0) {
            const auto& p = records[i - 1];
            const bool same_chain = p.map == r.map && p.resolution == r.resolution && p.scenario == r.scenario &&
                                    p.strategy == r.strategy;
            if (same_chain && p.outcome != Outcome::Solved)
                throw AggregationError("chain continues after a failure: " + record_to_csv(r));
        }
    }

    AggregateMetrics m;
    using GroupKey = std::tuple<std::string, int, int>;  // group, resolution, strategy
    std::map<GroupKey, std::set<std::pair<std::string, int>>> chains;
    std::map<std::tuple<std::string, int, int, int>, int> solved;  // + agents
    std::map<GroupKey, std::vector<double>> times;
    for (const auto& r : records) {
        const GroupKey g{r.group, r.resolution, static_cast<int>(r.strategy)};
        chains[g].insert({r.map, r.scenario});
        auto& s = solved[{r.group, r.resolution, static_cast<int>(r.strategy), r.agents}];
        if (r.outcome == Outcome::Solved) {
            ++s;
            times[g].push_back(r.time_ms);
        }
    }
    for (const auto& [key, count] : solved) {
        const auto& [group, res, strat, agents] = key;
        SuccessRate sr;
        sr.group = group;
        sr.resolution = res;
        sr.strategy = static_cast<Strategy>(strat);
        sr.agents = agents;
        sr.solved = count;
        sr.total = static_cast<int>(chains.at({group, res, strat}).size());
        sr.rate = static_cast<double>(sr.solved) / sr.total;
        m.success_rate.push_back(sr);
    }
    for (auto& [key, t] : times) {
        std::sort(t.begin(), t.end());
        m.runtime_instances.push_back(
            {std::get<0>(key), std::get<1>(key), static_cast<Strategy>(std::get<2>(key)), t});
    }

    std::map<std::tuple<std::string, int, int, int>, const ExperimentRecord*> motion;
    for (const auto& r : records)
        if (r.strategy == Strategy::MotionCBS && r.cost) motion[{r.map, r.resolution, r.scenario, r.agents}] = &r;
    for (const auto& r : records) {
        if (r.strategy != Strategy::PriorityCBSwP || !r.cost) continue;
        auto it = motion.find({r.map, r.resolution, r.scenario, r.agents});
        if (it == motion.end()) continue;
        const long long mc = *it->second->cost, pc = *r.cost;
        if (mc == 0 && pc != 0) continue;  // undefined ratio
        m.cost_ratios.push_back({r.map, r.group, r.resolution, r.scenario, r.agents, mc, pc,
                                 mc == 0 ? 1.0 : static_cast<double>(pc) / static_cast<double>(mc)});
    }
    return m;
}

namespace {

Json metrics_to_json(const AggregateMetrics& m) {
    Json sr = Json::array(), rt = Json::array(), cr = Json::array();
    for (const auto& s : m.success_rate)
        sr.push_back({{"group", s.group}, {"resolution", s.resolution}, {"strategy", to_string(s.strategy)},
                      {"agents", s.agents}, {"solved", s.solved}, {"total", s.total}, {"rate", s.rate}});
    for (const auto& r : m.runtime_instances)
        rt.push_back({{"group", r.group}, {"resolution", r.resolution}, {"strategy", to_string(r.strategy)},
                      {"times_ms", r.times_ms}});
    for (const auto& c : m.cost_ratios)
        cr.push_back({{"map", c.map}, {"group", c.group}, {"resolution", c.resolution}, {"scenario", c.scenario},
                      {"agents", c.agents}, {"motion_cost", c.motion_cost}, {"priority_cost", c.priority_cost},
                      {"ratio", c.ratio}});
    return {{"success_rate", sr}, {"runtime_instances", rt}, {"cost_ratios", cr}};
}

void open_or_throw(std::ofstream& out, const fs::path& p) {
    out.open(p);
    if (!out) throw std::runtime_error("cannot write " + p.string());
}

}  // namespace

void export_metrics(const AggregateMetrics& m, ExportFormat format, const fs::path& path) {
    if (format == ExportFormat::Json) {
        write_json_file(path, metrics_to_json(m));
        return;
    }
    const std::string stem = path.string();
    char buf[64];
    std::ofstream sr;
    open_or_throw(sr, stem + "_success_rate.csv");
    sr << "group,resolution,strategy,agents,solved,total,rate\n";
    for (const auto& s : m.success_rate) {
        std::snprintf(buf, sizeof buf, "%.6f", s.rate);
        sr << s.group << ',' << s.resolution << ',' << to_string(s.strategy) << ',' << s.agents << ',' << s.solved
           << ',' << s.total << ',' << buf << '\n';
    }
    std::ofstream rt;
    open_or_throw(rt, stem + "_runtime_instances.csv");
    rt << "group,resolution,strategy,rank,time_ms\n";
    for (const auto& r : m.runtime_instances)
        for (std::size_t i = 0; i < r.times_ms.size(); ++i) {
            std::snprintf(buf, sizeof buf, "%.3f", r.times_ms[i]);
            rt << r.group << ',' << r.resolution << ',' << to_string(r.strategy) << ',' << i + 1 << ',' << buf << '\n';
        }
    std::ofstream cr;
    open_or_throw(cr, stem + "_cost_ratios.csv");
    cr << "map,group,resolution,scenario,agents,motion_cost,priority_cost,ratio\n";
    for (const auto& c : m.cost_ratios) {
        std::snprintf(buf, sizeof buf, "%.6f", c.ratio);
        cr << c.map << ',' << c.group << ',' << c.resolution << ',' << c.scenario << ',' << c.agents << ','
           << c.motion_cost << ',' << c.priority_cost << ',' << buf << '\n';
    }
    if (!sr.flush() || !rt.flush() || !cr.flush()) throw std::runtime_error("failed writing metrics to " + stem);
}

AggregateMetrics load_metrics_json(const fs::path& path) {
    const Json j = read_json_file(path);
    AggregateMetrics m;
    try {
        for (const Json& s : j.at("success_rate"))
            m.success_rate.push_back({s.at("group"), s.at("resolution"), parse_strategy(s.at("strategy")),
                                      s.at("agents"), s.at("solved"), s.at("total"), s.at("rate")});
        for (const Json& r : j.at("runtime_instances"))
            m.runtime_instances.push_back({r.at("group"), r.at("resolution"), parse_strategy(r.at("strategy")),
                                           r.at("times_ms").get<std::vector<double>>()});
        for (const Json& c : j.at("cost_ratios"))
            m.cost_ratios.push_back({c.at("map"), c.at("group"), c.at("resolution"), c.at("scenario"), c.at("agents"),
                                     c.at("motion_cost"), c.at("priority_cost"), c.at("ratio")});
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument(path.string() + ": " + e.what());
    }
    return m;
}

}  // namespace mapf_lab
