#pragma once

// Independent reference implementations used by the unit and acceptance tests. None of them call
// into the code under test beyond roadmap construction.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <queue>
#include <random>
#include <set>
#include <vector>

#include "mapf_lab/grid_map.hpp"
#include "mapf_lab/roadmap.hpp"

namespace oracle {

using Graph = std::vector<std::vector<int>>;

inline std::vector<int> bfs(const Graph& g, int s) {
    std::vector<int> d(g.size(), -1);
    std::queue<int> q;
    d[static_cast<std::size_t>(s)] = 0;
    q.push(s);
    while (!q.empty()) {
        const int u = q.front();
        q.pop();
        for (int v : g[static_cast<std::size_t>(u)])
            if (d[static_cast<std::size_t>(v)] < 0) {
                d[static_cast<std::size_t>(v)] = d[static_cast<std::size_t>(u)] + 1;
                q.push(v);
            }
    }
    return d;
}

/// Enumerates every shortest s-t path explicitly, for every unordered pair {s, t}, and credits each
/// interior vertex 1 / (number of shortest s-t paths).
inline std::vector<double> brute_force_betweenness(const Graph& g) {
    const int n = static_cast<int>(g.size());
    std::vector<std::vector<int>> dist;
    for (int s = 0; s < n; ++s) dist.push_back(bfs(g, s));
    std::vector<double> bc(g.size(), 0.0);
    for (int s = 0; s < n; ++s)
        for (int t = s + 1; t < n; ++t) {
            if (dist[static_cast<std::size_t>(s)][static_cast<std::size_t>(t)] < 0) continue;
            std::vector<std::vector<int>> paths;
            std::vector<int> cur{s};
            std::function<void(int)> walk = [&](int u) {
                if (u == t) {
                    paths.push_back(cur);
                    return;
                }
                for (int v : g[static_cast<std::size_t>(u)]) {
                    if (dist[static_cast<std::size_t>(s)][static_cast<std::size_t>(v)] !=
                            dist[static_cast<std::size_t>(s)][static_cast<std::size_t>(u)] + 1 ||
                        dist[static_cast<std::size_t>(v)][static_cast<std::size_t>(t)] !=
                            dist[static_cast<std::size_t>(u)][static_cast<std::size_t>(t)] - 1)
                        continue;
                    cur.push_back(v);
                    walk(v);
                    cur.pop_back();
                }
            };
            walk(s);
            for (const auto& p : paths)
                for (std::size_t i = 1; i + 1 < p.size(); ++i)
                    bc[static_cast<std::size_t>(p[i])] += 1.0 / static_cast<double>(paths.size());
        }
    return bc;
}

/// Connected random graph: a random spanning tree plus extra edges.
inline Graph random_connected_graph(int n, double extra_density, std::mt19937_64& rng) {
    std::set<std::pair<int, int>> edges;
    for (int v = 1; v < n; ++v) {
        const int u = static_cast<int>(rng() % static_cast<std::uint64_t>(v));
        edges.insert({u, v});
    }
    std::uniform_real_distribution<double> coin(0.0, 1.0);
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v)
            if (coin(rng) < extra_density) edges.insert({u, v});
    Graph g(static_cast<std::size_t>(n));
    for (auto [u, v] : edges) {
        g[static_cast<std::size_t>(u)].push_back(v);
        g[static_cast<std::size_t>(v)].push_back(u);
    }
    return g;
}

inline mapf_lab::GridMap random_grid(int width, int height, double density, std::mt19937_64& rng) {
    std::vector<bool> blocked(static_cast<std::size_t>(width * height));
    std::uniform_real_distribution<double> coin(0.0, 1.0);
    for (std::size_t i = 0; i < blocked.size(); ++i) blocked[i] = coin(rng) < density;
    return mapf_lab::GridMap(width, height, blocked);
}

/// Distinct starts and distinct goals inside one connected component; nullopt when the roadmap
/// has no component with enough vertices.
inline std::optional<std::vector<mapf_lab::AgentTask>> random_tasks(const mapf_lab::GridRoadmap& rm, int agents,
                                                                    std::mt19937_64& rng) {
    Graph g(rm.vertex_count());
    for (std::size_t v = 0; v < g.size(); ++v)
        for (auto w : rm.neighbors(static_cast<mapf_lab::VertexId>(v))) g[v].push_back(w);
    std::vector<int> comp(g.size(), -1);
    std::vector<std::vector<int>> members;
    for (std::size_t s = 0; s < g.size(); ++s) {
        if (comp[s] >= 0) continue;
        const auto d = bfs(g, static_cast<int>(s));
        members.emplace_back();
        for (std::size_t v = 0; v < g.size(); ++v)
            if (d[v] >= 0) {
                comp[v] = static_cast<int>(members.size() - 1);
                members.back().push_back(static_cast<int>(v));
            }
    }
    std::vector<std::vector<int>> eligible;
    for (auto& m : members)
        if (static_cast<int>(m.size()) >= agents) eligible.push_back(m);
    if (eligible.empty()) return std::nullopt;
    auto pool = eligible[rng() % eligible.size()];

    // Bodies at distinct vertices can still overlap when r > 1; reject such draws.
    auto spaced = [&](const std::vector<int>& picks) {
        const double w = rm.robot_width();
        for (std::size_t i = 0; i < picks.size(); ++i)
            for (std::size_t j = i + 1; j < picks.size(); ++j) {
                const auto p = rm.point(picks[i]), q = rm.point(picks[j]);
                if (std::abs(p.x - q.x) < w && std::abs(p.y - q.y) < w) return false;
            }
        return true;
    };
    auto draw = [&]() -> std::optional<std::vector<int>> {
        for (int attempt = 0; attempt < 200; ++attempt) {
            std::vector<int> picks;
            std::set<int> used;
            while (static_cast<int>(picks.size()) < agents) {
                const int v = pool[rng() % pool.size()];
                if (used.insert(v).second) picks.push_back(v);
            }
            if (spaced(picks)) return picks;
        }
        return std::nullopt;
    };
    const auto starts = draw();
    const auto goals = draw();
    if (!starts || !goals) return std::nullopt;
    std::vector<mapf_lab::AgentTask> tasks;
    for (int a = 0; a < agents; ++a)
        tasks.push_back({a, (*starts)[static_cast<std::size_t>(a)], (*goals)[static_cast<std::size_t>(a)]});
    return tasks;
}

/// Optimal sum of arrival times under classical unit-grid rules: no two agents on one vertex and
/// no two agents swapping along an edge. Agents may park on their goal for good ("finish"), after
/// which they stop accruing cost and keep occupying the goal. A* over (positions, finished set)
/// with the sum of BFS distances of unfinished agents as heuristic. Intended for tiny instances.
inline std::optional<long long> joint_optimal_cost(const mapf_lab::GridRoadmap& rm,
                                                   const std::vector<mapf_lab::AgentTask>& tasks) {
    const int n = static_cast<int>(tasks.size());
    Graph g(rm.vertex_count());
    for (std::size_t v = 0; v < g.size(); ++v)
        for (auto w : rm.neighbors(static_cast<mapf_lab::VertexId>(v))) g[v].push_back(w);
    std::vector<std::vector<int>> h;
    for (const auto& t : tasks) h.push_back(bfs(g, t.goal));
    for (int a = 0; a < n; ++a)
        if (h[static_cast<std::size_t>(a)][static_cast<std::size_t>(tasks[static_cast<std::size_t>(a)].start)] < 0)
            return std::nullopt;

    struct State {
        std::vector<int> pos;
        unsigned done = 0;
        bool operator<(const State& o) const { return std::tie(pos, done) < std::tie(o.pos, o.done); }
    };
    auto heur = [&](const State& s) {
        long long sum = 0;
        for (int a = 0; a < n; ++a)
            if (!(s.done >> a & 1u)) sum += h[static_cast<std::size_t>(a)][static_cast<std::size_t>(s.pos[static_cast<std::size_t>(a)])];
        return sum;
    };
    const unsigned all = (1u << n) - 1u;
    std::map<State, long long> best;
    using Entry = std::pair<long long, std::pair<long long, State>>;  // f, (g, state)
    auto cmp = [](const Entry& a, const Entry& b) { return a.first > b.first; };
    std::priority_queue<Entry, std::vector<Entry>, decltype(cmp)> open(cmp);
    State s0;
    for (const auto& t : tasks) s0.pos.push_back(t.start);
    best[s0] = 0;
    open.push({heur(s0), {0, s0}});
    while (!open.empty()) {
        auto [f, gs] = open.top();
        open.pop();
        auto [gc, s] = gs;
        if (best[s] < gc) continue;
        if (s.done == all) return gc;

        auto relax = [&](const State& t, long long cost) {
            auto it = best.find(t);
            if (it != best.end() && it->second <= cost) return;
            best[t] = cost;
            open.push({cost + heur(t), {cost, t}});
        };
        // Finishing is free and only allowed on the goal.
        for (int a = 0; a < n; ++a)
            if (!(s.done >> a & 1u) && s.pos[static_cast<std::size_t>(a)] == tasks[static_cast<std::size_t>(a)].goal) {
                State t = s;
                t.done |= 1u << a;
                relax(t, gc);
            }
        // One timestep: every unfinished agent waits or moves.
        std::vector<std::vector<int>> options(static_cast<std::size_t>(n));
        int active = 0;
        for (int a = 0; a < n; ++a) {
            const int p = s.pos[static_cast<std::size_t>(a)];
            options[static_cast<std::size_t>(a)].push_back(p);
            if (s.done >> a & 1u) continue;
            ++active;
            for (int w : g[static_cast<std::size_t>(p)]) options[static_cast<std::size_t>(a)].push_back(w);
        }
        if (active == 0) continue;
        std::vector<int> next(static_cast<std::size_t>(n));
        std::function<void(int)> rec = [&](int a) {
            if (a == n) {
                for (int i = 0; i < n; ++i)
                    for (int j = i + 1; j < n; ++j) {
                        const auto I = static_cast<std::size_t>(i), J = static_cast<std::size_t>(j);
                        if (next[I] == next[J]) return;
                        if (next[I] == s.pos[J] && next[J] == s.pos[I] && next[I] != s.pos[I]) return;
                    }
                State t{next, s.done};
                relax(t, gc + active);
                return;
            }
            for (int v : options[static_cast<std::size_t>(a)]) {
                next[static_cast<std::size_t>(a)] = v;
                rec(a + 1);
            }
        };
        rec(0);
    }
    return std::nullopt;
}

}  // namespace oracle
