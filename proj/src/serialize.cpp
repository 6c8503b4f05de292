#include "mapf_lab/serialize.hpp"

#include <algorithm>
#include <fstream>
#include <stdexcept>

namespace mapf_lab {

Json roadmap_to_json(const GridRoadmap& roadmap) {
    Json vertices = Json::array();
    Json edges = Json::array();
    for (std::size_t v = 0; v < roadmap.vertex_count(); ++v) {
        const auto id = static_cast<VertexId>(v);
        const LatticeIndex idx = roadmap.lattice(id);
        const Point p = roadmap.point(id);
        vertices.push_back({{"id", id}, {"i", idx.i}, {"j", idx.j}, {"x", p.x}, {"y", p.y}});
        for (VertexId w : roadmap.neighbors(id))
            if (id < w) edges.push_back({id, w});
    }
    return {{"resolution", roadmap.resolution()},
            {"robot_width", roadmap.robot_width()},
            {"lattice_width", roadmap.lattice_width()},
            {"lattice_height", roadmap.lattice_height()},
            {"vertices", std::move(vertices)},
            {"edges", std::move(edges)}};
}

Json plan_to_json(const TeamPlan& plan, const GridRoadmap& roadmap) {
    Json paths = Json::array();
    for (const Path& p : plan.paths) {
        Json lattice = Json::array();
        for (VertexId v : p.states) {
            const LatticeIndex idx = roadmap.lattice(v);
            lattice.push_back({idx.i, idx.j});
        }
        paths.push_back({{"agent", p.agent}, {"vertices", p.states}, {"lattice", std::move(lattice)}});
    }
    return {{"resolution", roadmap.resolution()}, {"paths", std::move(paths)}};
}

TeamPlan plan_from_json(const Json& j, const GridRoadmap& roadmap) {
    if (!j.is_object() || !j.contains("paths") || !j["paths"].is_array())
        throw std::invalid_argument("plan JSON needs a \"paths\" array");
    if (j.contains("resolution") && j["resolution"] != roadmap.resolution())
        throw std::invalid_argument("plan was made at resolution " + j["resolution"].dump() + ", roadmap has " +
                                    std::to_string(roadmap.resolution()));
    TeamPlan plan;
    try {
        for (const Json& jp : j["paths"]) {
            Path p;
            p.agent = jp.at("agent").get<AgentId>();
            if (jp.contains("lattice")) {
                for (const Json& c : jp["lattice"]) {
                    const LatticeIndex idx{c.at(0).get<int>(), c.at(1).get<int>()};
                    const VertexId v = roadmap.vertex_at(idx);
                    if (v == kNoVertex)
                        throw std::invalid_argument("agent " + std::to_string(p.agent) + ": lattice point [" +
                                                    std::to_string(idx.i) + ", " + std::to_string(idx.j) +
                                                    "] is not a vertex");
                    p.states.push_back(v);
                }
            } else {
                for (const Json& c : jp.at("vertices")) {
                    const auto v = c.get<VertexId>();
                    if (v < 0 || static_cast<std::size_t>(v) >= roadmap.vertex_count())
                        throw std::invalid_argument("agent " + std::to_string(p.agent) + ": vertex " +
                                                    std::to_string(v) + " out of range");
                    p.states.push_back(v);
                }
            }
            if (p.states.empty()) throw std::invalid_argument("agent " + std::to_string(p.agent) + ": empty path");
            plan.paths.push_back(std::move(p));
        }
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument(std::string("malformed plan JSON: ") + e.what());
    }
    std::stable_sort(plan.paths.begin(), plan.paths.end(),
                     [](const Path& a, const Path& b) { return a.agent < b.agent; });
    return plan;
}

Json stats_to_json(const SolveStats& s) {
    return {{"nodes_expanded", s.nodes_expanded},       {"nodes_generated", s.nodes_generated},
            {"conflicts_resolved", s.conflicts_resolved}, {"low_level_calls", s.low_level_calls},
            {"low_level_expansions", s.low_level_expansions}, {"wall_time_s", s.wall_time_s}};
}

Json result_to_json(const SolveResult& result, const GridRoadmap& roadmap) {
    Json j = {{"outcome", to_string(result.outcome)}, {"stats", stats_to_json(result.stats)}};
    if (result.plan) {
        j["cost"] = result.cost;
        j["makespan"] = makespan(*result.plan);
        const Json p = plan_to_json(*result.plan, roadmap);
        j["resolution"] = p["resolution"];
        j["paths"] = p["paths"];
    } else {
        j["cost"] = nullptr;
    }
    return j;
}

Json conflict_to_json(const Conflict& c) {
    auto loc = [](const AgentLocation& l) { return Json{{"from", l.from}, {"to", l.to}}; };
    return {{"kind", c.kind == ConflictKind::Vertex ? "vertex" : "edge"},
            {"agents", {c.agent_a, c.agent_b}},
            {"timestep", c.timestep},
            {"loc_a", loc(c.loc_a)},
            {"loc_b", loc(c.loc_b)}};
}

Json read_json_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    try {
        return Json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw std::invalid_argument(path.string() + ": " + e.what());
    }
}

void write_json_file(const std::filesystem::path& path, const Json& j) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << j.dump(2) << '\n';
    if (!out.flush()) throw std::runtime_error("failed writing " + path.string());
}

}  // namespace mapf_lab
