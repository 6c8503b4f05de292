#pragma once

#include <cmath>
#include <optional>
#include <vector>

#include "mapf_lab/plan.hpp"
#include "mapf_lab/roadmap.hpp"

namespace mapf_lab {

/// Open overlap of two axis-aligned squares of side `robot_width`: touching bodies do not collide.
inline bool bodies_overlap(Point p, Point q, double robot_width) {
    return std::abs(p.x - q.x) < robot_width && std::abs(p.y - q.y) < robot_width;
}

enum class ConflictKind { Vertex, Edge };

/// Where one agent is during a conflict. For vertex conflicts `from == to` is the occupied vertex;
/// for edge conflicts it is the transition from..to between t and t+1 (`from == to` for a waiter).
struct AgentLocation {
    VertexId from = kNoVertex;
    VertexId to = kNoVertex;

    bool is_move() const noexcept { return from != to; }
    friend bool operator==(const AgentLocation&, const AgentLocation&) = default;
};

struct Conflict {
    ConflictKind kind = ConflictKind::Vertex;
    AgentId agent_a = 0;  // agent_a < agent_b
    AgentId agent_b = 0;
    AgentLocation loc_a;
    AgentLocation loc_b;
    Timestep timestep = 0;

    friend bool operator==(const Conflict&, const Conflict&) = default;
};

/// Earliest conflict: by timestep, vertex checks at t before the t -> t+1 transition checks, then by
/// lowest (agent_a, agent_b). Agents rest on their final vertex after their path ends. Each transition
/// is sampled once, at the edge midpoint (movers) or the vertex (waiters).
std::optional<Conflict> find_first_conflict(const TeamPlan& plan, const GridRoadmap& roadmap);

/// Every conflict in the same order find_first_conflict uses. No endpoint checks.
std::vector<Conflict> all_conflicts(const TeamPlan& plan, const GridRoadmap& roadmap);

/// Audits a plan against its instance: one path per agent, in agent order, from start to goal, valid
/// on the roadmap. Throws ValidationError otherwise. Returns all conflicts (empty iff the plan is valid).
std::vector<Conflict> validate_plan(const TeamPlan& plan, const GridRoadmap& roadmap, const ProblemInstance& instance);

/// True when the bodies following `a` and `b` overlap at any vertex or transition sample, with both
/// agents resting on their final vertices indefinitely.
bool paths_collide(const Path& a, const Path& b, const GridRoadmap& roadmap);

}  // namespace mapf_lab
