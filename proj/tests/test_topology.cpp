#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "mapf_lab/topology.hpp"
#include "test_data.hpp"

using namespace mapf_lab;

namespace {

TopologyKind label_of(const std::string& name) {
    const GridRoadmap rm = build_roadmap(load_map(test_data::map(name)), 1);
    return analyze_topology(rm).label.label;
}

}  // namespace

TEST(Classify, EmptyMapIsLargeOpen) { EXPECT_EQ(label_of("empty-16-16"), TopologyKind::LargeOpen); }

TEST(Classify, MazeIsNarrowDominated) { EXPECT_EQ(label_of("maze-32-32-2"), TopologyKind::NarrowDominated); }

TEST(Classify, CityIsMixed) { EXPECT_EQ(label_of("Berlin_1_256"), TopologyKind::Mixed); }

TEST(Classify, EvidenceFractionsAreBounded) {
    for (const char* name : {"empty-8-8", "maze-32-32-4", "room-32-32-4"}) {
        const GridRoadmap rm = build_roadmap(load_map(test_data::map(name)), 1);
        const auto l = analyze_topology(rm).label;
        for (double x : {l.chain_fraction, l.isolated_fraction, l.low_cluster_mass}) {
            EXPECT_GE(x, 0.0) << name;
            EXPECT_LE(x, 1.0) << name;
        }
        EXPECT_EQ(l.component_count, 1) << name;
        EXPECT_EQ(l.classified_vertices, rm.vertex_count()) << name;
    }
}

TEST(Classify, FeaturelessWhenNoHighVertexReachesTheThreshold) {
    const GridRoadmap rm = build_roadmap(load_map(test_data::map("maze-32-32-2")), 1);
    auto report = analyze_topology(rm);
    ClassifierConfig cfg;
    cfg.high_threshold = 1.5;
    EXPECT_EQ(classify(rm, report.field, cfg).label, TopologyKind::Featureless);
}

TEST(Classify, UsesTheLargestComponent) {
    // Two disconnected strips; the larger one is a path whose BC varies strongly.
    std::vector<bool> blocked(3 * 9, false);
    for (int c = 0; c < 9; ++c) blocked[static_cast<std::size_t>(9 + c)] = true;
    for (int c = 2; c < 9; ++c) blocked[static_cast<std::size_t>(18 + c)] = true;
    const GridRoadmap rm = build_roadmap(GridMap(9, 3, blocked), 1);
    const auto report = analyze_topology(rm);
    EXPECT_EQ(report.label.component_count, 2);
    EXPECT_EQ(report.label.classified_vertices, 9u);
}

TEST(Classify, RejectsEmptyRoadmapAndMismatchedField) {
    const GridRoadmap none = build_roadmap(GridMap(2, 2, std::vector<bool>(4, true)), 1);
    EXPECT_THROW(classify(none, CentralityField{}), std::invalid_argument);
    const GridRoadmap rm = build_roadmap(GridMap::empty(3, 3), 1);
    EXPECT_THROW(classify(rm, CentralityField{}), std::invalid_argument);
}

TEST(Heatmap, OneRowPerVertex) {
    const GridRoadmap rm = build_roadmap(GridMap::empty(2, 2), 1);
    const auto f = betweenness(adjacency_of(rm));
    std::ostringstream out;
    emit_heatmap(rm, f, out);
    std::istringstream in(out.str());
    std::string line;
    std::getline(in, line);
    EXPECT_EQ(line, "x,y,bc");
    int rows = 0;
    while (std::getline(in, line)) {
        ++rows;
        EXPECT_EQ(line.substr(line.rfind(',') + 1), "0.000000");  // 2x2 cycle: all equal
    }
    EXPECT_EQ(rows, 4);
}

TEST(Heatmap, RowCountMatchesRoadmap) {
    const GridRoadmap rm = build_roadmap(load_map(test_data::map("maze-32-32-2")), 2);
    BetweennessOptions o;
    o.sample = 50;
    const auto f = betweenness(adjacency_of(rm), o);
    const auto path = std::filesystem::temp_directory_path() / "mapf_lab_heatmap_test.csv";
    emit_heatmap(rm, f, path);
    std::ifstream in(path);
    std::size_t lines = 0;
    for (std::string l; std::getline(in, l);) ++lines;
    EXPECT_EQ(lines, rm.vertex_count() + 1);
    std::filesystem::remove(path);
}

TEST(Heatmap, UnwritablePathThrows) {
    const GridRoadmap rm = build_roadmap(GridMap::empty(2, 2), 1);
    EXPECT_THROW(emit_heatmap(rm, betweenness(adjacency_of(rm)), std::filesystem::path("/nonexistent/dir/h.csv")),
                 std::runtime_error);
}
