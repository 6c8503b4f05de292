#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "mapf_lab/roadmap.hpp"

namespace mapf_lab {

/// Undirected, unweighted graph as adjacency lists.
using AdjacencyList = std::vector<std::vector<VertexId>>;

AdjacencyList adjacency_of(const GridRoadmap& roadmap);

struct CentralityField {
    std::vector<double> raw;         // sum over unordered pairs {s, t}, s != v != t
    std::vector<double> normalized;  // (raw - min) / (max - min), all zero when max == min
    double raw_variance = 0.0;       // population variance of `raw`
};

struct BetweennessOptions {
    /// Number of BFS sources drawn uniformly without replacement; unset means every vertex.
    std::optional<std::size_t> sample;
    std::uint64_t seed = 1;
    /// Worker threads for the per-source passes. Results do not depend on this value.
    unsigned threads = 1;
};

/// Brandes accumulation: one BFS per source plus dependency back-propagation. With sampling, the
/// per-source sums are scaled by V / sample. Throws std::invalid_argument when sample > V.
CentralityField betweenness(const AdjacencyList& graph, const BetweennessOptions& options = {});

/// Rebuilds `normalized` and `raw_variance` from `raw`.
void finalize_field(CentralityField& field);

/// Component index per vertex (components numbered by their smallest vertex) and the count.
std::pair<std::vector<int>, int> connected_components(const AdjacencyList& graph);

}  // namespace mapf_lab
