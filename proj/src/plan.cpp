#include "mapf_lab/plan.hpp"

#include <algorithm>
#include <string>

namespace mapf_lab {

Timestep path_cost(const Path& path) {
    if (path.states.empty()) return 0;
    auto t = static_cast<Timestep>(path.states.size()) - 1;
    const VertexId goal = path.states.back();
    while (t > 0 && path.states[static_cast<std::size_t>(t) - 1] == goal) --t;
    return t;
}

long long sum_of_costs(const TeamPlan& plan) {
    long long total = 0;
    for (const Path& p : plan.paths) total += path_cost(p);
    return total;
}

Timestep makespan(const TeamPlan& plan) {
    Timestep m = 0;
    for (const Path& p : plan.paths) m = std::max(m, path_cost(p));
    return m;
}

bool path_is_valid(const Path& path, const GridRoadmap& roadmap) {
    if (path.states.empty()) return false;
    const auto n = static_cast<VertexId>(roadmap.vertex_count());
    for (std::size_t t = 0; t < path.states.size(); ++t) {
        const VertexId v = path.states[t];
        if (v < 0 || v >= n) return false;
        if (t > 0 && v != path.states[t - 1] && !roadmap.adjacent(path.states[t - 1], v)) return false;
    }
    return true;
}

Path project_path(const GridRoadmap& low, const GridRoadmap& high, const Path& path) {
    if (!(low.source_map() == high.source_map()))
        throw std::invalid_argument("roadmaps are built from different maps");
    if (high.resolution() % low.resolution() != 0)
        throw std::invalid_argument("resolution " + std::to_string(high.resolution()) + " is not a multiple of " +
                                    std::to_string(low.resolution()));
    if (!path_is_valid(path, low)) throw std::invalid_argument("path is not valid on the low-resolution roadmap");

    const int m = high.resolution() / low.resolution();
    auto lift = [&](LatticeIndex idx) { return LatticeIndex{idx.i * m, idx.j * m}; };
    auto vertex = [&](LatticeIndex idx) {
        const VertexId v = high.vertex_at(idx);
        if (v == kNoVertex) throw std::invalid_argument("projected lattice point is not a vertex of the target roadmap");
        return v;
    };

    Path out;
    out.agent = path.agent;
    out.states.reserve((path.states.size() - 1) * static_cast<std::size_t>(m) + 1);
    out.states.push_back(vertex(lift(low.lattice(path.states.front()))));
    for (std::size_t t = 1; t < path.states.size(); ++t) {
        const LatticeIndex a = lift(low.lattice(path.states[t - 1]));
        const LatticeIndex b = lift(low.lattice(path.states[t]));
        const int di = (b.i - a.i) / m;
        const int dj = (b.j - a.j) / m;
        for (int k = 1; k <= m; ++k) out.states.push_back(vertex({a.i + di * k, a.j + dj * k}));
    }
    return out;
}

}  // namespace mapf_lab
