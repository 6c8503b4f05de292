#include "mapf_lab/topology.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>

namespace mapf_lab {

std::string to_string(TopologyKind k) {
    switch (k) {
        case TopologyKind::LargeOpen: return "LargeOpen";
        case TopologyKind::Featureless: return "Featureless";
        case TopologyKind::NarrowDominated: return "NarrowDominated";
        case TopologyKind::Mixed: return "Mixed";
    }
    return "?";
}

TopologyLabel classify(const GridRoadmap& roadmap, const CentralityField& field, const ClassifierConfig& config) {
    const std::size_t n = roadmap.vertex_count();
    if (n == 0) throw std::invalid_argument("cannot classify an empty roadmap");
    if (field.raw.size() != n)
        throw std::invalid_argument("centrality field has " + std::to_string(field.raw.size()) + " entries for " +
                                    std::to_string(n) + " vertices");

    const AdjacencyList adj = adjacency_of(roadmap);
    const auto [comp, count] = connected_components(adj);
    std::vector<std::size_t> sizes(static_cast<std::size_t>(count), 0);
    for (int c : comp) ++sizes[static_cast<std::size_t>(c)];
    const int largest = static_cast<int>(std::max_element(sizes.begin(), sizes.end()) - sizes.begin());

    TopologyLabel out;
    out.component_count = count;
    out.classified_vertices = sizes[static_cast<std::size_t>(largest)];

    std::vector<VertexId> members;
    for (std::size_t v = 0; v < n; ++v)
        if (comp[v] == largest) members.push_back(static_cast<VertexId>(v));

    double mean = 0.0, lo = field.raw[static_cast<std::size_t>(members[0])], hi = lo;
    for (VertexId v : members) {
        const double x = field.raw[static_cast<std::size_t>(v)];
        mean += x;
        lo = std::min(lo, x);
        hi = std::max(hi, x);
    }
    mean /= static_cast<double>(members.size());
    double var = 0.0;
    for (VertexId v : members) var += std::pow(field.raw[static_cast<std::size_t>(v)] - mean, 2);
    var /= static_cast<double>(members.size());
    out.coefficient_of_variation = mean > 0.0 ? std::sqrt(var) / mean : 0.0;

    std::vector<double> norm(n, -1.0);
    for (VertexId v : members) {
        const auto vi = static_cast<std::size_t>(v);
        norm[vi] = hi > lo ? (field.raw[vi] - lo) / (hi - lo) : 0.0;
    }

    std::size_t low_open = 0;
    for (VertexId v : members) {
        const auto vi = static_cast<std::size_t>(v);
        if (norm[vi] > config.low_threshold || adj[vi].size() != 4) continue;
        bool open = true;
        for (VertexId w : adj[vi]) open = open && adj[static_cast<std::size_t>(w)].size() == 4;
        if (open) ++low_open;
    }
    out.low_cluster_mass = static_cast<double>(low_open) / static_cast<double>(members.size());

    // Group high-BC vertices by lattice adjacency and weigh each group by its normalized BC.
    std::vector<char> seen(n, 0);
    std::vector<VertexId> stack;
    double high_mass = 0.0, chain_mass = 0.0;
    for (VertexId s : members) {
        const auto si = static_cast<std::size_t>(s);
        if (seen[si] || norm[si] < config.high_threshold) continue;
        seen[si] = 1;
        stack.push_back(s);
        std::size_t size = 0;
        double mass = 0.0;
        while (!stack.empty()) {
            const auto u = static_cast<std::size_t>(stack.back());
            stack.pop_back();
            ++size;
            mass += norm[u];
            for (VertexId w : adj[u]) {
                const auto wi = static_cast<std::size_t>(w);
                if (seen[wi] || norm[wi] < config.high_threshold) continue;
                seen[wi] = 1;
                stack.push_back(w);
            }
        }
        out.high_vertices += size;
        high_mass += mass;
        if (size >= config.chain_min) chain_mass += mass;
    }
    if (high_mass > 0.0) {
        out.chain_fraction = chain_mass / high_mass;
        out.isolated_fraction = 1.0 - out.chain_fraction;
    }

    if (out.coefficient_of_variation < config.empty_cv_threshold)
        out.label = TopologyKind::LargeOpen;
    else if (out.high_vertices > 0 && out.low_cluster_mass >= config.open_fraction)
        out.label = TopologyKind::Mixed;
    else if (out.high_vertices > 0 && out.chain_fraction >= config.narrow_fraction)
        out.label = TopologyKind::NarrowDominated;
    else
        out.label = TopologyKind::Featureless;
    return out;
}

TopologyReport analyze_topology(const GridRoadmap& roadmap, const TopologyOptions& options) {
    BetweennessOptions bc = options.centrality;
    if (!bc.sample && roadmap.vertex_count() > options.exact_limit)
        bc.sample = std::min(options.default_sample, roadmap.vertex_count());
    TopologyReport report;
    report.field = betweenness(adjacency_of(roadmap), bc);
    report.label = classify(roadmap, report.field, options.thresholds);
    return report;
}

void emit_heatmap(const GridRoadmap& roadmap, const CentralityField& field, std::ostream& out) {
    if (field.normalized.size() != roadmap.vertex_count())
        throw std::invalid_argument("centrality field does not match the roadmap");
    char buf[96];
    out << "x,y,bc\n";
    for (std::size_t v = 0; v < roadmap.vertex_count(); ++v) {
        const Point p = roadmap.point(static_cast<VertexId>(v));
        std::snprintf(buf, sizeof buf, "%.6f,%.6f,%.6f\n", p.x, p.y, field.normalized[v]);
        out << buf;
    }
}

void emit_heatmap(const GridRoadmap& roadmap, const CentralityField& field, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write heatmap to " + path.string());
    emit_heatmap(roadmap, field, out);
    if (!out.flush()) throw std::runtime_error("failed writing heatmap to " + path.string());
}

}  // namespace mapf_lab
