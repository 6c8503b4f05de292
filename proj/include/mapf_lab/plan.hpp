#pragma once

#include <vector>

#include "mapf_lab/roadmap.hpp"
#include "mapf_lab/types.hpp"

namespace mapf_lab {

/// Timestep-indexed vertex sequence; states[0] is the start, the last state the goal.
struct Path {
    AgentId agent = 0;
    std::vector<VertexId> states;

    friend bool operator==(const Path&, const Path&) = default;
};

struct TeamPlan {
    std::vector<Path> paths;

    friend bool operator==(const TeamPlan&, const TeamPlan&) = default;
};

/// Agents rest at their last state once the path ends.
inline VertexId position_at(const Path& path, Timestep t) {
    if (t < 0) t = 0;
    const auto idx = static_cast<std::size_t>(t);
    return idx < path.states.size() ? path.states[idx] : path.states.back();
}

/// Arrival timestep: the earliest t after which the agent never leaves its final vertex.
/// Trailing waits do not count; a path that starts on its goal and stays there costs 0.
Timestep path_cost(const Path& path);

/// Sum of per-agent arrival timesteps. (Counting vertex-sequence lengths instead adds exactly n.)
long long sum_of_costs(const TeamPlan& plan);

/// Largest arrival timestep; 0 for an empty team.
Timestep makespan(const TeamPlan& plan);

/// True when consecutive states are equal or adjacent on `roadmap` and all ids are vertices.
bool path_is_valid(const Path& path, const GridRoadmap& roadmap);

/// Maps a path planned on `low` onto `high`, whose resolution must be an integer multiple m of
/// `low`'s: each move becomes m unit moves through the intermediate lattice vertices and each wait
/// becomes m waits. Both roadmaps must come from the same map. Throws std::invalid_argument.
Path project_path(const GridRoadmap& low, const GridRoadmap& high, const Path& path);

}  // namespace mapf_lab
