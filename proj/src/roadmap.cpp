#include "mapf_lab/roadmap.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "mapf_lab/conflict.hpp"

namespace mapf_lab {

namespace {
constexpr double kEps = 1e-9;
}

Point GridRoadmap::lattice_point(LatticeIndex idx) const {
    return {0.5 + static_cast<double>(idx.i) / resolution_, 0.5 + static_cast<double>(idx.j) / resolution_};
}

Point GridRoadmap::point(VertexId v) const { return lattice_point(lattice(v)); }

VertexId GridRoadmap::vertex_at(LatticeIndex idx) const noexcept {
    if (idx.i < 0 || idx.j < 0 || idx.i >= lattice_w_ || idx.j >= lattice_h_) return kNoVertex;
    return lattice_to_vertex_[static_cast<std::size_t>(idx.j) * lattice_w_ + idx.i];
}

bool GridRoadmap::adjacent(VertexId u, VertexId v) const {
    const auto n = neighbors(u);
    return std::find(n.begin(), n.end(), v) != n.end();
}

bool GridRoadmap::body_clear(Point p) const {
    const double hw = robot_width_ / 2.0;
    const GridMap& m = *map_;
    if (p.x - hw < -kEps || p.y - hw < -kEps || p.x + hw > m.width() + kEps || p.y + hw > m.height() + kEps)
        return false;
    // Cells [c, c+1] whose closed extent meets the closed body square.
    const int c0 = std::max(0, static_cast<int>(std::ceil(p.x - hw - 1.0 - kEps)));
    const int c1 = std::min(m.width() - 1, static_cast<int>(std::floor(p.x + hw + kEps)));
    const int r0 = std::max(0, static_cast<int>(std::ceil(p.y - hw - 1.0 - kEps)));
    const int r1 = std::min(m.height() - 1, static_cast<int>(std::floor(p.y + hw + kEps)));
    for (int row = r0; row <= r1; ++row)
        for (int col = c0; col <= c1; ++col)
            if (m.blocked(col, row)) return false;
    return true;
}

GridRoadmap build_roadmap(std::shared_ptr<const GridMap> map, int resolution, double robot_width) {
    if (!map) throw std::invalid_argument("null map");
    if (resolution < 1) throw std::invalid_argument("resolution must be >= 1, got " + std::to_string(resolution));
    if (!(robot_width > 0.0) || robot_width > 1.0)
        throw std::invalid_argument("robot width must be in (0, 1], got " + std::to_string(robot_width));

    GridRoadmap rm;
    rm.map_ = std::move(map);
    rm.resolution_ = resolution;
    rm.robot_width_ = robot_width;
    rm.lattice_w_ = resolution * (rm.map_->width() - 1) + 1;
    rm.lattice_h_ = resolution * (rm.map_->height() - 1) + 1;
    rm.lattice_to_vertex_.assign(static_cast<std::size_t>(rm.lattice_w_) * rm.lattice_h_, kNoVertex);

    for (int j = 0; j < rm.lattice_h_; ++j) {
        for (int i = 0; i < rm.lattice_w_; ++i) {
            if (!rm.body_clear(rm.lattice_point({i, j}))) continue;
            rm.lattice_to_vertex_[static_cast<std::size_t>(j) * rm.lattice_w_ + i] =
                static_cast<VertexId>(rm.lattice_.size());
            rm.lattice_.push_back({i, j});
        }
    }

    rm.offsets_.reserve(rm.lattice_.size() + 1);
    rm.offsets_.push_back(0);
    for (const LatticeIndex& idx : rm.lattice_) {
        const Point here = rm.lattice_point(idx);
        for (const LatticeIndex step : {LatticeIndex{0, -1}, LatticeIndex{-1, 0}, LatticeIndex{1, 0}, LatticeIndex{0, 1}}) {
            const LatticeIndex nb{idx.i + step.i, idx.j + step.j};
            const VertexId v = rm.vertex_at(nb);
            if (v == kNoVertex) continue;
            if (!rm.body_clear(midpoint(here, rm.lattice_point(nb)))) continue;
            rm.adjacency_.push_back(v);
        }
        rm.offsets_.push_back(static_cast<std::int64_t>(rm.adjacency_.size()));
    }
    return rm;
}

GridRoadmap build_roadmap(const GridMap& map, int resolution, double robot_width) {
    return build_roadmap(std::make_shared<const GridMap>(map), resolution, robot_width);
}

void check_instance(const ProblemInstance& instance) {
    if (!instance.roadmap) throw ValidationError("instance has no roadmap");
    const GridRoadmap& rm = *instance.roadmap;
    const auto n = static_cast<VertexId>(rm.vertex_count());
    for (std::size_t a = 0; a < instance.tasks.size(); ++a) {
        const AgentTask& t = instance.tasks[a];
        const auto idx = static_cast<std::int64_t>(a);
        if (t.agent != static_cast<AgentId>(a))
            throw ValidationError("agent ids must be 0..n-1 in order; task " + std::to_string(a) + " has id " +
                                      std::to_string(t.agent),
                                  idx);
        if (t.start < 0 || t.start >= n || t.goal < 0 || t.goal >= n)
            throw ValidationError("agent " + std::to_string(a) + " has an endpoint that is not a roadmap vertex", idx);
    }
    for (std::size_t a = 0; a < instance.tasks.size(); ++a) {
        for (std::size_t b = a + 1; b < instance.tasks.size(); ++b) {
            const AgentTask& ta = instance.tasks[a];
            const AgentTask& tb = instance.tasks[b];
            if (bodies_overlap(rm.point(ta.start), rm.point(tb.start), rm.robot_width()))
                throw ValidationError("starts of agents " + std::to_string(a) + " and " + std::to_string(b) + " overlap",
                                      static_cast<std::int64_t>(b));
            if (bodies_overlap(rm.point(ta.goal), rm.point(tb.goal), rm.robot_width()))
                throw ValidationError("goals of agents " + std::to_string(a) + " and " + std::to_string(b) + " overlap",
                                      static_cast<std::int64_t>(b));
        }
    }
}

ProblemInstance make_instance(std::shared_ptr<const GridRoadmap> roadmap, std::span<const ScenarioPair> pairs,
                              std::size_t agents) {
    if (!roadmap) throw std::invalid_argument("null roadmap");
    if (agents > pairs.size())
        throw std::invalid_argument("requested " + std::to_string(agents) + " agents but only " +
                                    std::to_string(pairs.size()) + " start/goal pairs are available");
    ProblemInstance inst;
    inst.roadmap = std::move(roadmap);
    inst.tasks.reserve(agents);
    for (std::size_t a = 0; a < agents; ++a) {
        const VertexId s = inst.roadmap->vertex_at_cell(pairs[a].start);
        const VertexId g = inst.roadmap->vertex_at_cell(pairs[a].goal);
        if (s == kNoVertex || g == kNoVertex)
            throw ValidationError("agent " + std::to_string(a) + ": start or goal cell has no roadmap vertex",
                                  static_cast<std::int64_t>(a));
        inst.tasks.push_back({static_cast<AgentId>(a), s, g});
    }
    check_instance(inst);
    return inst;
}

}  // namespace mapf_lab
