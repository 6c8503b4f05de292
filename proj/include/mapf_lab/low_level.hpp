#pragma once

#include <chrono>
#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "mapf_lab/plan.hpp"
#include "mapf_lab/roadmap.hpp"

namespace mapf_lab {

enum class ConstraintKind { Vertex, Edge };

/// Forbids `agent` from occupying `from` at `timestep` (Vertex), or from taking the transition
/// from -> to between `timestep` and `timestep + 1` (Edge; from == to forbids waiting).
struct MotionConstraint {
    AgentId agent = 0;
    ConstraintKind kind = ConstraintKind::Vertex;
    VertexId from = kNoVertex;
    VertexId to = kNoVertex;
    Timestep timestep = 0;

    static MotionConstraint vertex(AgentId a, VertexId v, Timestep t) { return {a, ConstraintKind::Vertex, v, v, t}; }
    static MotionConstraint edge(AgentId a, VertexId u, VertexId v, Timestep t) { return {a, ConstraintKind::Edge, u, v, t}; }

    friend bool operator==(const MotionConstraint&, const MotionConstraint&) = default;
};

/// Paths of other robots (same roadmap and body size) to be avoided at every vertex and transition
/// sample for the whole horizon; each obstacle rests on its final vertex forever. Non-owning.
struct DynamicObstacleSet {
    std::vector<const Path*> paths;
};

struct SearchLimits {
    /// Latest timestep a path may use. Unset: no cap (the search is still finite).
    std::optional<Timestep> horizon;
    std::size_t node_budget = std::numeric_limits<std::size_t>::max();
    std::optional<std::chrono::steady_clock::time_point> deadline;
};

enum class SearchStatus { Found, NoPath, Exhausted, Timeout };

struct LowLevelResult {
    SearchStatus status = SearchStatus::NoPath;
    std::optional<Path> path;
    std::size_t expansions = 0;
};

inline constexpr int kUnreachable = std::numeric_limits<int>::max() / 4;

/// Exact unit-edge distances to `goal` (backward BFS); kUnreachable where no path exists.
std::vector<int> admissible_heuristic(const GridRoadmap& roadmap, VertexId goal);

/// Minimum-arrival-time path for `task` that respects `constraints` (entries for other agents are
/// ignored), never overlaps an obstacle body, and can then rest at the goal indefinitely.
/// `heuristic` must come from admissible_heuristic for the task goal.
///
/// Once every constraint and obstacle is in the past the environment is static, so states beyond
/// that time are merged by vertex; this keeps the search finite and makes NoPath a proof of
/// infeasibility (unless a horizon was given).
LowLevelResult shortest_path(const GridRoadmap& roadmap, const AgentTask& task, std::span<const MotionConstraint> constraints,
                             const DynamicObstacleSet& obstacles, const SearchLimits& limits,
                             std::span<const int> heuristic);

/// Convenience overload computing the heuristic itself.
LowLevelResult shortest_path(const GridRoadmap& roadmap, const AgentTask& task, std::span<const MotionConstraint> constraints,
                             const DynamicObstacleSet& obstacles = {}, const SearchLimits& limits = {});

/// Replays `path` against the constraints of its agent; returns the violated ones.
std::vector<MotionConstraint> violated_constraints(const Path& path, std::span<const MotionConstraint> constraints);

}  // namespace mapf_lab
