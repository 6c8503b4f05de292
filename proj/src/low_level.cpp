#include "mapf_lab/low_level.hpp"

#include <algorithm>
#include <deque>
#include <queue>
#include <unordered_map>
#include <unordered_set>

#include "mapf_lab/conflict.hpp"

namespace mapf_lab {

std::vector<int> admissible_heuristic(const GridRoadmap& roadmap, VertexId goal) {
    std::vector<int> dist(roadmap.vertex_count(), kUnreachable);
    std::deque<VertexId> queue;
    dist[static_cast<std::size_t>(goal)] = 0;
    queue.push_back(goal);
    while (!queue.empty()) {
        const VertexId u = queue.front();
        queue.pop_front();
        for (const VertexId v : roadmap.neighbors(u)) {
            auto& d = dist[static_cast<std::size_t>(v)];
            if (d != kUnreachable) continue;
            d = dist[static_cast<std::size_t>(u)] + 1;
            queue.push_back(v);
        }
    }
    return dist;
}

namespace {

std::uint64_t vertex_key(VertexId v, Timestep t) {
    return (static_cast<std::uint64_t>(t) << 36) | (static_cast<std::uint64_t>(v) << 1);
}

// Keyed by (from, t); the target vertex is matched on lookup.
std::uint64_t edge_key(VertexId u, Timestep t) {
    return (static_cast<std::uint64_t>(t) << 36) | (static_cast<std::uint64_t>(u) << 1) | 1u;
}

class ConstraintTable {
  public:
    ConstraintTable(AgentId agent, std::span<const MotionConstraint> constraints) {
        for (const MotionConstraint& c : constraints) {
            if (c.agent != agent) continue;
            latest_ = std::max(latest_, c.timestep);
            if (c.kind == ConstraintKind::Vertex)
                vertices_.insert(vertex_key(c.from, c.timestep));
            else
                edges_.emplace(edge_key(c.from, c.timestep), c.to);
        }
    }

    bool vertex_forbidden(VertexId v, Timestep t) const { return vertices_.count(vertex_key(v, t)) != 0; }

    bool edge_forbidden(VertexId u, VertexId v, Timestep t) const {
        auto [b, e] = edges_.equal_range(edge_key(u, t));
        for (auto it = b; it != e; ++it)
            if (it->second == v) return true;
        return false;
    }

    /// -1 when empty.
    Timestep latest() const noexcept { return latest_; }

  private:
    std::unordered_set<std::uint64_t> vertices_;
    std::unordered_multimap<std::uint64_t, VertexId> edges_;
    Timestep latest_ = -1;
};

class ObstacleTable {
  public:
    ObstacleTable(const GridRoadmap& roadmap, const DynamicObstacleSet& obstacles) : width_(roadmap.robot_width()) {
        tracks_.reserve(obstacles.paths.size());
        for (const Path* p : obstacles.paths) {
            std::vector<Point> pts;
            pts.reserve(p->states.size());
            for (const VertexId v : p->states) pts.push_back(roadmap.point(v));
            last_ = std::max(last_, static_cast<Timestep>(pts.size()) - 1);
            tracks_.push_back(std::move(pts));
        }
    }

    bool vertex_blocked(Point p, Timestep t) const {
        for (const auto& track : tracks_)
            if (bodies_overlap(p, at(track, t), width_)) return true;
        return false;
    }

    /// `mid` is the agent's sample for the t -> t+1 transition.
    bool transition_blocked(Point mid, Timestep t) const {
        for (const auto& track : tracks_)
            if (bodies_overlap(mid, midpoint(at(track, t), at(track, t + 1)), width_)) return true;
        return false;
    }

    /// Whether some obstacle rests on a position overlapping `p` forever.
    bool permanently_blocked(Point p) const {
        for (const auto& track : tracks_)
            if (bodies_overlap(p, track.back(), width_)) return true;
        return false;
    }

    /// Time after which every obstacle is at rest.
    Timestep last_motion() const noexcept { return last_; }

  private:
    static Point at(const std::vector<Point>& track, Timestep t) {
        return track[std::min(static_cast<std::size_t>(t), track.size() - 1)];
    }

    double width_;
    std::vector<std::vector<Point>> tracks_;
    Timestep last_ = 0;
};

struct SearchNode {
    VertexId vertex;
    Timestep time;
    std::int32_t parent;
};

struct OpenEntry {
    int f;
    int h;
    VertexId vertex;
    bool wait;
    std::uint64_t seq;
    std::int32_t node;
};

// Lower f first; then lower h, smaller vertex id, moves before waits, and insertion order.
struct OpenOrder {
    bool operator()(const OpenEntry& a, const OpenEntry& b) const {
        if (a.f != b.f) return a.f > b.f;
        if (a.h != b.h) return a.h > b.h;
        if (a.vertex != b.vertex) return a.vertex > b.vertex;
        if (a.wait != b.wait) return a.wait;
        return a.seq > b.seq;
    }
};

}  // namespace

LowLevelResult shortest_path(const GridRoadmap& roadmap, const AgentTask& task, std::span<const MotionConstraint> constraints,
                             const DynamicObstacleSet& obstacles, const SearchLimits& limits,
                             std::span<const int> heuristic) {
    LowLevelResult result;
    const ConstraintTable ctable(task.agent, constraints);
    const ObstacleTable otable(roadmap, obstacles);
    const Point goal_pt = roadmap.point(task.goal);

    if (heuristic[static_cast<std::size_t>(task.start)] >= kUnreachable) return result;
    if (otable.permanently_blocked(goal_pt)) return result;

    // From `settle` on, nothing changes: constraints and obstacle motion are all in the past.
    const Timestep settle = std::max({Timestep{0}, ctable.latest() + 1, otable.last_motion()});

    // Earliest time from which the agent can wait on its goal forever.
    Timestep goal_rest = 0;
    for (Timestep t = 0; t <= settle; ++t) {
        if (ctable.vertex_forbidden(task.goal, t) || otable.vertex_blocked(goal_pt, t)) goal_rest = t + 1;
        if (ctable.edge_forbidden(task.goal, task.goal, t) || otable.transition_blocked(goal_pt, t)) goal_rest = t + 1;
    }

    auto state_ok = [&](VertexId v, Timestep t) {
        return !ctable.vertex_forbidden(v, t) && !otable.vertex_blocked(roadmap.point(v), t);
    };
    auto transition_ok = [&](VertexId u, VertexId v, Timestep t) {
        if (ctable.edge_forbidden(u, v, t)) return false;
        return !otable.transition_blocked(midpoint(roadmap.point(u), roadmap.point(v)), t);
    };

    if (!state_ok(task.start, 0)) return result;

    std::vector<SearchNode> nodes;
    std::priority_queue<OpenEntry, std::vector<OpenEntry>, OpenOrder> open;
    std::unordered_map<std::uint64_t, Timestep> best;  // keyed by (vertex, min(time, settle))
    std::unordered_set<std::uint64_t> closed;
    std::uint64_t seq = 0;

    auto key_of = [&](VertexId v, Timestep t) { return vertex_key(v, std::min(t, settle)); };
    auto push = [&](VertexId v, Timestep t, std::int32_t parent, bool wait) {
        const int h = heuristic[static_cast<std::size_t>(v)];
        if (h >= kUnreachable) return;
        if (limits.horizon && t + h > *limits.horizon) return;
        const auto key = key_of(v, t);
        auto [it, inserted] = best.try_emplace(key, t);
        if (!inserted) {
            if (it->second <= t) return;
            it->second = t;
        }
        nodes.push_back({v, t, parent});
        open.push({t + h, h, v, wait, seq++, static_cast<std::int32_t>(nodes.size() - 1)});
    };

    push(task.start, 0, -1, false);
    while (!open.empty()) {
        const OpenEntry top = open.top();
        open.pop();
        const SearchNode node = nodes[static_cast<std::size_t>(top.node)];
        const auto key = key_of(node.vertex, node.time);
        if (!closed.insert(key).second) continue;

        if (node.vertex == task.goal && node.time >= goal_rest) {
            Path path;
            path.agent = task.agent;
            for (std::int32_t i = top.node; i >= 0; i = nodes[static_cast<std::size_t>(i)].parent)
                path.states.push_back(nodes[static_cast<std::size_t>(i)].vertex);
            std::reverse(path.states.begin(), path.states.end());
            result.status = SearchStatus::Found;
            result.path = std::move(path);
            return result;
        }

        if (++result.expansions > limits.node_budget) {
            result.status = SearchStatus::Exhausted;
            return result;
        }
        if (limits.deadline && (result.expansions & 255u) == 0 && std::chrono::steady_clock::now() >= *limits.deadline) {
            result.status = SearchStatus::Timeout;
            return result;
        }

        const Timestep nt = node.time + 1;
        for (const VertexId v : roadmap.neighbors(node.vertex))
            if (state_ok(v, nt) && transition_ok(node.vertex, v, node.time)) push(v, nt, top.node, false);
        if (state_ok(node.vertex, nt) && transition_ok(node.vertex, node.vertex, node.time))
            push(node.vertex, nt, top.node, true);
    }
    return result;
}

LowLevelResult shortest_path(const GridRoadmap& roadmap, const AgentTask& task, std::span<const MotionConstraint> constraints,
                             const DynamicObstacleSet& obstacles, const SearchLimits& limits) {
    const auto h = admissible_heuristic(roadmap, task.goal);
    return shortest_path(roadmap, task, constraints, obstacles, limits, h);
}

std::vector<MotionConstraint> violated_constraints(const Path& path, std::span<const MotionConstraint> constraints) {
    std::vector<MotionConstraint> out;
    for (const MotionConstraint& c : constraints) {
        if (c.agent != path.agent) continue;
        if (c.kind == ConstraintKind::Vertex) {
            if (position_at(path, c.timestep) == c.from) out.push_back(c);
        } else if (position_at(path, c.timestep) == c.from && position_at(path, c.timestep + 1) == c.to) {
            out.push_back(c);
        }
    }
    return out;
}

}  // namespace mapf_lab
