#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "mapf_lab/conflict.hpp"
#include "mapf_lab/plan.hpp"
#include "mapf_lab/roadmap.hpp"
#include "mapf_lab/solver.hpp"

namespace mapf_lab {

using Json = nlohmann::json;

/// {"resolution", "robot_width", "lattice_width", "lattice_height",
///  "vertices": [{"id", "i", "j", "x", "y"}], "edges": [[u, v], ...] with u < v}
Json roadmap_to_json(const GridRoadmap& roadmap);

/// Each path is written both as vertex ids and as lattice coordinates [i, j].
Json plan_to_json(const TeamPlan& plan, const GridRoadmap& roadmap);

/// Reads {"paths": [{"agent", "lattice" | "vertices"}]}, preferring lattice coordinates. Paths are
/// returned in agent order. Throws std::invalid_argument on malformed input or unknown vertices.
TeamPlan plan_from_json(const Json& j, const GridRoadmap& roadmap);

Json stats_to_json(const SolveStats& stats);
/// Outcome, cost, makespan, stats, and the plan when solved.
Json result_to_json(const SolveResult& result, const GridRoadmap& roadmap);

Json conflict_to_json(const Conflict& c);

Json read_json_file(const std::filesystem::path& path);
/// Throws std::runtime_error when the file cannot be written.
void write_json_file(const std::filesystem::path& path, const Json& j);

}  // namespace mapf_lab
