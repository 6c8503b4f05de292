#pragma once

#include <filesystem>
#include <optional>
#include <ostream>
#include <string>

#include "mapf_lab/centrality.hpp"
#include "mapf_lab/roadmap.hpp"

namespace mapf_lab {

struct ClassifierConfig {
    /// Raw-BC coefficient of variation below which the roadmap counts as one large open area.
    double empty_cv_threshold = 0.68;
    /// Normalized BC at or above which a vertex is high-centrality.
    double high_threshold = 0.6;
    /// Minimum size of a connected high-BC group to count as a chain.
    std::size_t chain_min = 5;
    /// Share of high-BC mass that must lie on chains for NarrowDominated.
    double narrow_fraction = 0.5;
    /// Normalized BC at or below which a vertex is low-centrality.
    double low_threshold = 0.1;
    /// Share of vertices that are low-BC and open for the roadmap to count as having open clusters.
    double open_fraction = 0.4;
};

enum class TopologyKind { LargeOpen, Featureless, NarrowDominated, Mixed };

std::string to_string(TopologyKind k);

struct TopologyLabel {
    TopologyKind label = TopologyKind::Featureless;
    double coefficient_of_variation = 0.0;
    double chain_fraction = 0.0;       // high-BC mass on chains
    double isolated_fraction = 0.0;    // high-BC mass off chains
    double low_cluster_mass = 0.0;     // vertices that are low-BC with an open neighbourhood
    std::size_t high_vertices = 0;
    int component_count = 0;
    std::size_t classified_vertices = 0;  // size of the largest component
};

/// `field` covers the whole roadmap; only the largest component is classified, with normalization
/// redone over that component. A vertex is open when it and all its neighbours have four
/// neighbours. Throws std::invalid_argument on an empty roadmap or a field of the wrong size.
TopologyLabel classify(const GridRoadmap& roadmap, const CentralityField& field, const ClassifierConfig& config = {});

struct TopologyOptions {
    ClassifierConfig thresholds;
    BetweennessOptions centrality;
    /// Vertex count above which BC is sampled when `centrality.sample` is unset.
    std::size_t exact_limit = 5000;
    std::size_t default_sample = 1000;
};

struct TopologyReport {
    CentralityField field;
    TopologyLabel label;
};

TopologyReport analyze_topology(const GridRoadmap& roadmap, const TopologyOptions& options = {});

/// CSV with header `x,y,bc`, one row per vertex in id order.
void emit_heatmap(const GridRoadmap& roadmap, const CentralityField& field, std::ostream& out);
/// Throws std::runtime_error when the file cannot be written.
void emit_heatmap(const GridRoadmap& roadmap, const CentralityField& field, const std::filesystem::path& path);

}  // namespace mapf_lab
