#include "mapf_lab/conflict.hpp"

#include <algorithm>
#include <string>

namespace mapf_lab {

namespace {

Timestep horizon(const TeamPlan& plan) {
    Timestep h = 0;
    for (const Path& p : plan.paths) h = std::max(h, static_cast<Timestep>(p.states.size()) - 1);
    return h;
}

// Scans the plan in conflict order; `sink` returns false to stop.
template <typename Sink>
void scan_conflicts(const TeamPlan& plan, const GridRoadmap& roadmap, Sink&& sink) {
    const std::size_t n = plan.paths.size();
    const double w = roadmap.robot_width();
    const Timestep last = horizon(plan);
    std::vector<VertexId> now(n), next(n);
    std::vector<Point> pts(n), mids(n);
    std::vector<LatticeIndex> steps(n);

    for (Timestep t = 0; t <= last; ++t) {
        for (std::size_t a = 0; a < n; ++a) {
            now[a] = position_at(plan.paths[a], t);
            pts[a] = roadmap.point(now[a]);
        }
        for (std::size_t a = 0; a < n; ++a) {
            for (std::size_t b = a + 1; b < n; ++b) {
                if (!bodies_overlap(pts[a], pts[b], w)) continue;
                Conflict c{ConflictKind::Vertex, plan.paths[a].agent, plan.paths[b].agent, {now[a], now[a]},
                           {now[b], now[b]}, t};
                if (c.agent_a > c.agent_b) {
                    std::swap(c.agent_a, c.agent_b);
                    std::swap(c.loc_a, c.loc_b);
                }
                if (!sink(c)) return;
            }
        }
        if (t == last) break;

        for (std::size_t a = 0; a < n; ++a) {
            next[a] = position_at(plan.paths[a], t + 1);
            mids[a] = midpoint(pts[a], roadmap.point(next[a]));
            const LatticeIndex from = roadmap.lattice(now[a]), to = roadmap.lattice(next[a]);
            steps[a] = {to.i - from.i, to.j - from.j};
        }
        for (std::size_t a = 0; a < n; ++a) {
            for (std::size_t b = a + 1; b < n; ++b) {
                // Equal displacements (two waiters included) keep the separation fixed, so the vertex
                // check at t already decided this step.
                if (steps[a] == steps[b]) continue;
                if (!bodies_overlap(mids[a], mids[b], w)) continue;
                Conflict c{ConflictKind::Edge, plan.paths[a].agent, plan.paths[b].agent, {now[a], next[a]},
                           {now[b], next[b]}, t};
                if (c.agent_a > c.agent_b) {
                    std::swap(c.agent_a, c.agent_b);
                    std::swap(c.loc_a, c.loc_b);
                }
                if (!sink(c)) return;
            }
        }
    }
}

}  // namespace

std::optional<Conflict> find_first_conflict(const TeamPlan& plan, const GridRoadmap& roadmap) {
    std::optional<Conflict> first;
    scan_conflicts(plan, roadmap, [&](const Conflict& c) {
        first = c;
        return false;
    });
    return first;
}

std::vector<Conflict> all_conflicts(const TeamPlan& plan, const GridRoadmap& roadmap) {
    std::vector<Conflict> out;
    scan_conflicts(plan, roadmap, [&](const Conflict& c) {
        out.push_back(c);
        return true;
    });
    return out;
}

std::vector<Conflict> validate_plan(const TeamPlan& plan, const GridRoadmap& roadmap, const ProblemInstance& instance) {
    if (plan.paths.size() != instance.tasks.size())
        throw ValidationError("plan has " + std::to_string(plan.paths.size()) + " paths but the instance has " +
                              std::to_string(instance.tasks.size()) + " agents");
    for (std::size_t a = 0; a < plan.paths.size(); ++a) {
        const Path& p = plan.paths[a];
        const AgentTask& task = instance.tasks[a];
        const auto idx = static_cast<std::int64_t>(a);
        if (p.agent != task.agent)
            throw ValidationError("path " + std::to_string(a) + " belongs to agent " + std::to_string(p.agent), idx);
        if (!path_is_valid(p, roadmap))
            throw ValidationError("path of agent " + std::to_string(a) + " is not a valid roadmap walk", idx);
        if (p.states.front() != task.start)
            throw ValidationError("path of agent " + std::to_string(a) + " does not begin at its start", idx);
        if (p.states.back() != task.goal)
            throw ValidationError("path of agent " + std::to_string(a) + " does not end at its goal", idx);
    }
    return all_conflicts(plan, roadmap);
}

bool paths_collide(const Path& a, const Path& b, const GridRoadmap& roadmap) {
    TeamPlan pair{{a, b}};
    pair.paths[0].agent = 0;
    pair.paths[1].agent = 1;
    return find_first_conflict(pair, roadmap).has_value();
}

}  // namespace mapf_lab
