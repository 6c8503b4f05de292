#include "mapf_lab/centrality.hpp"

#include <algorithm>
#include <atomic>
#include <numeric>
#include <random>
#include <stdexcept>
#include <string>
#include <thread>

namespace mapf_lab {

AdjacencyList adjacency_of(const GridRoadmap& roadmap) {
    AdjacencyList adj(roadmap.vertex_count());
    for (std::size_t v = 0; v < adj.size(); ++v) {
        const auto nb = roadmap.neighbors(static_cast<VertexId>(v));
        adj[v].assign(nb.begin(), nb.end());
    }
    return adj;
}

void finalize_field(CentralityField& field) {
    const auto& raw = field.raw;
    field.normalized.assign(raw.size(), 0.0);
    field.raw_variance = 0.0;
    if (raw.empty()) return;
    const double mean = std::accumulate(raw.begin(), raw.end(), 0.0) / static_cast<double>(raw.size());
    double var = 0.0;
    for (double x : raw) var += (x - mean) * (x - mean);
    field.raw_variance = var / static_cast<double>(raw.size());
    const auto [lo, hi] = std::minmax_element(raw.begin(), raw.end());
    if (*hi > *lo)
        for (std::size_t i = 0; i < raw.size(); ++i) field.normalized[i] = (raw[i] - *lo) / (*hi - *lo);
}

namespace {

// Per-thread scratch for single-source passes.
struct BrandesScratch {
    explicit BrandesScratch(std::size_t n) : dist(n, -1), sigma(n, 0.0), delta(n, 0.0) { order.reserve(n); }
    std::vector<int> dist;
    std::vector<double> sigma;
    std::vector<double> delta;
    std::vector<VertexId> order;
};

void accumulate_source(const AdjacencyList& g, VertexId s, BrandesScratch& w, std::vector<double>& into) {
    w.order.clear();
    w.dist[static_cast<std::size_t>(s)] = 0;
    w.sigma[static_cast<std::size_t>(s)] = 1.0;
    w.order.push_back(s);
    for (std::size_t head = 0; head < w.order.size(); ++head) {
        const VertexId u = w.order[head];
        const int du = w.dist[static_cast<std::size_t>(u)];
        for (VertexId v : g[static_cast<std::size_t>(u)]) {
            auto& dv = w.dist[static_cast<std::size_t>(v)];
            if (dv < 0) {
                dv = du + 1;
                w.order.push_back(v);
            }
            if (dv == du + 1) w.sigma[static_cast<std::size_t>(v)] += w.sigma[static_cast<std::size_t>(u)];
        }
    }
    for (auto it = w.order.rbegin(); it != w.order.rend(); ++it) {
        const auto v = static_cast<std::size_t>(*it);
        for (VertexId u : g[v]) {
            const auto ui = static_cast<std::size_t>(u);
            if (w.dist[ui] == w.dist[v] - 1) w.delta[ui] += w.sigma[ui] / w.sigma[v] * (1.0 + w.delta[v]);
        }
        if (*it != s) into[v] += w.delta[v];
    }
    for (VertexId v : w.order) {
        const auto vi = static_cast<std::size_t>(v);
        w.dist[vi] = -1;
        w.sigma[vi] = 0.0;
        w.delta[vi] = 0.0;
    }
}

constexpr std::size_t kSourcesPerChunk = 32;

}  // namespace

CentralityField betweenness(const AdjacencyList& graph, const BetweennessOptions& options) {
    const std::size_t n = graph.size();
    std::vector<VertexId> sources(n);
    std::iota(sources.begin(), sources.end(), 0);
    double scale = 0.5;  // each unordered pair is reached from both endpoints
    if (options.sample) {
        if (*options.sample > n)
            throw std::invalid_argument("sample size " + std::to_string(*options.sample) + " exceeds vertex count " +
                                        std::to_string(n));
        if (*options.sample == 0) throw std::invalid_argument("sample size must be positive");
        if (*options.sample < n) {
            std::mt19937_64 rng(options.seed);
            std::shuffle(sources.begin(), sources.end(), rng);
            sources.resize(*options.sample);
            std::sort(sources.begin(), sources.end());
        }
        scale *= static_cast<double>(n) / static_cast<double>(*options.sample);
    }

    // Partial sums per fixed-size chunk of sources, reduced in chunk order so that the result does
    // not depend on the thread count.
    const std::size_t chunks = (sources.size() + kSourcesPerChunk - 1) / kSourcesPerChunk;
    std::vector<std::vector<double>> partial(chunks);
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        BrandesScratch scratch(n);
        for (std::size_t c = next++; c < chunks; c = next++) {
            partial[c].assign(n, 0.0);
            const std::size_t end = std::min(sources.size(), (c + 1) * kSourcesPerChunk);
            for (std::size_t i = c * kSourcesPerChunk; i < end; ++i) accumulate_source(graph, sources[i], scratch, partial[c]);
        }
    };
    const unsigned threads = std::max(1u, std::min<unsigned>(options.threads, static_cast<unsigned>(std::max<std::size_t>(1, chunks))));
    if (threads == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }

    CentralityField field;
    field.raw.assign(n, 0.0);
    for (const auto& part : partial)
        for (std::size_t v = 0; v < n; ++v) field.raw[v] += part[v];
    for (double& x : field.raw) x *= scale;
    finalize_field(field);
    return field;
}

std::pair<std::vector<int>, int> connected_components(const AdjacencyList& graph) {
    std::vector<int> comp(graph.size(), -1);
    int count = 0;
    std::vector<VertexId> stack;
    for (std::size_t s = 0; s < graph.size(); ++s) {
        if (comp[s] >= 0) continue;
        comp[s] = count;
        stack.push_back(static_cast<VertexId>(s));
        while (!stack.empty()) {
            const VertexId u = stack.back();
            stack.pop_back();
            for (VertexId v : graph[static_cast<std::size_t>(u)]) {
                if (comp[static_cast<std::size_t>(v)] >= 0) continue;
                comp[static_cast<std::size_t>(v)] = count;
                stack.push_back(v);
            }
        }
        ++count;
    }
    return {comp, count};
}

}  // namespace mapf_lab
