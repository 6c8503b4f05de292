#pragma once

#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "mapf_lab/grid_map.hpp"
#include "mapf_lab/types.hpp"

namespace mapf_lab {

struct LatticeIndex {
    int i = 0;  // column direction
    int j = 0;  // row direction
    friend bool operator==(const LatticeIndex&, const LatticeIndex&) = default;
};

/// Resolution-r lattice over a grid map. Lattice point (i, j) sits at (0.5 + i/r, 0.5 + j/r) in cell
/// units; a point becomes a vertex when a square robot of side `robot_width` centred on it stays inside
/// the map and does not touch any blocked cell (boundary contact counts as collision). Vertex ids are
/// row-major over the full lattice with invalid points skipped. Immutable once built.
class GridRoadmap {
  public:
    int resolution() const noexcept { return resolution_; }
    double robot_width() const noexcept { return robot_width_; }
    const GridMap& source_map() const noexcept { return *map_; }
    const std::shared_ptr<const GridMap>& source_map_ptr() const noexcept { return map_; }

    int lattice_width() const noexcept { return lattice_w_; }
    int lattice_height() const noexcept { return lattice_h_; }

    std::size_t vertex_count() const noexcept { return lattice_.size(); }
    std::size_t edge_count() const noexcept { return adjacency_.size() / 2; }

    LatticeIndex lattice(VertexId v) const { return lattice_[static_cast<std::size_t>(v)]; }
    Point point(VertexId v) const;
    Point lattice_point(LatticeIndex idx) const;

    /// kNoVertex when the lattice point is outside the lattice or not a valid vertex.
    VertexId vertex_at(LatticeIndex idx) const noexcept;
    /// Vertex at the centre of a map cell.
    VertexId vertex_at_cell(Cell c) const noexcept { return vertex_at({c.col * resolution_, c.row * resolution_}); }

    /// Neighbours in ascending id order (up, left, right, down).
    std::span<const VertexId> neighbors(VertexId v) const {
        const auto b = offsets_[static_cast<std::size_t>(v)];
        const auto e = offsets_[static_cast<std::size_t>(v) + 1];
        return {adjacency_.data() + b, static_cast<std::size_t>(e - b)};
    }
    bool adjacent(VertexId u, VertexId v) const;

    /// True when a robot body centred at `p` stays in bounds and clear of blocked cells.
    bool body_clear(Point p) const;

  private:
    friend GridRoadmap build_roadmap(std::shared_ptr<const GridMap> map, int resolution, double robot_width);

    std::shared_ptr<const GridMap> map_;
    int resolution_ = 1;
    double robot_width_ = 0.5;
    int lattice_w_ = 0;
    int lattice_h_ = 0;
    std::vector<LatticeIndex> lattice_;
    std::vector<VertexId> lattice_to_vertex_;
    std::vector<std::int64_t> offsets_;
    std::vector<VertexId> adjacency_;
};

inline constexpr double kDefaultRobotWidth = 0.5;

/// Throws std::invalid_argument when resolution < 1 or robot_width is outside (0, 1].
GridRoadmap build_roadmap(std::shared_ptr<const GridMap> map, int resolution, double robot_width = kDefaultRobotWidth);
GridRoadmap build_roadmap(const GridMap& map, int resolution, double robot_width = kDefaultRobotWidth);

struct AgentTask {
    AgentId agent = 0;
    VertexId start = kNoVertex;
    VertexId goal = kNoVertex;
};

struct ProblemInstance {
    std::shared_ptr<const GridRoadmap> roadmap;
    std::vector<AgentTask> tasks;

    std::size_t agent_count() const noexcept { return tasks.size(); }
};

/// Builds an instance from the first `agents` scenario pairs, mapping each cell to the vertex at its
/// centre. Throws ValidationError (index = agent) when an endpoint is not a vertex or when two starts
/// (or two goals) have overlapping bodies; std::invalid_argument when `agents` exceeds the pairs.
ProblemInstance make_instance(std::shared_ptr<const GridRoadmap> roadmap, std::span<const ScenarioPair> pairs,
                              std::size_t agents);

/// Checks ids are 0..n-1 and endpoints are valid, non-overlapping vertices. Throws ValidationError.
void check_instance(const ProblemInstance& instance);

}  // namespace mapf_lab
