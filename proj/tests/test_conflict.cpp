#include <gtest/gtest.h>

#include <random>
#include <set>
#include <tuple>

#include "mapf_lab/conflict.hpp"
#include "mapf_lab/grid_map.hpp"

using namespace mapf_lab;

namespace {

GridRoadmap grid(int w, int h, int r) { return build_roadmap(GridMap::empty(w, h), r); }

VertexId at(const GridRoadmap& rm, int i, int j) {
    const VertexId v = rm.vertex_at({i, j});
    EXPECT_NE(v, kNoVertex) << i << "," << j;
    return v;
}

}  // namespace

TEST(BodiesOverlap, Predicate) {
    EXPECT_TRUE(bodies_overlap({1, 1}, {1, 1}, 0.5));
    EXPECT_FALSE(bodies_overlap({1, 1}, {1.5, 1}, 0.5));
    EXPECT_FALSE(bodies_overlap({1, 1}, {2, 1}, 0.5));
    EXPECT_TRUE(bodies_overlap({1, 1}, {1.25, 1}, 0.5));
    EXPECT_FALSE(bodies_overlap({1, 1}, {1.25, 1.5}, 0.5));
}

TEST(BodiesOverlap, AdjacentVerticesByResolution) {
    const auto r1 = grid(4, 4, 1), r2 = grid(4, 4, 2), r4 = grid(4, 4, 4);
    auto adjacent_overlap = [](const GridRoadmap& rm) {
        return bodies_overlap(rm.point(rm.vertex_at({0, 0})), rm.point(rm.vertex_at({1, 0})), rm.robot_width());
    };
    EXPECT_FALSE(adjacent_overlap(r1));
    EXPECT_FALSE(adjacent_overlap(r2));  // touching only
    EXPECT_TRUE(adjacent_overlap(r4));
}

TEST(FindFirstConflict, SwapIsAnEdgeConflict) {
    const auto rm = grid(4, 1, 1);
    const VertexId a = at(rm, 1, 0), b = at(rm, 2, 0);
    const TeamPlan plan{{{0, {a, b}}, {1, {b, a}}}};
    const auto c = find_first_conflict(plan, rm);
    ASSERT_TRUE(c);
    EXPECT_EQ(c->kind, ConflictKind::Edge);
    EXPECT_EQ(c->timestep, 0);
    EXPECT_EQ(c->loc_a, (AgentLocation{a, b}));
    EXPECT_EQ(c->loc_b, (AgentLocation{b, a}));
}

TEST(FindFirstConflict, SameVertexAtThree) {
    const auto rm = grid(7, 1, 1);
    const TeamPlan plan{{{0, {at(rm, 0, 0), at(rm, 1, 0), at(rm, 2, 0), at(rm, 3, 0)}},
                         {1, {at(rm, 6, 0), at(rm, 5, 0), at(rm, 4, 0), at(rm, 3, 0)}}}};
    const auto c = find_first_conflict(plan, rm);
    ASSERT_TRUE(c);
    EXPECT_EQ(c->kind, ConflictKind::Vertex);
    EXPECT_EQ(c->timestep, 3);
    EXPECT_EQ(c->loc_a.from, at(rm, 3, 0));
    EXPECT_EQ(c->agent_a, 0);
    EXPECT_EQ(c->agent_b, 1);
}

TEST(FindFirstConflict, MoverBesideAWaiterAtHalfResolutionOnlyTouches) {
    // r=2: the waiter sits exactly one body width above the mover's whole segment.
    const auto rm = grid(3, 3, 2);
    const TeamPlan plan{{{0, {at(rm, 0, 0), at(rm, 1, 0)}}, {1, {at(rm, 1, 1), at(rm, 1, 1)}}}};
    EXPECT_FALSE(find_first_conflict(plan, rm));
}

TEST(FindFirstConflict, PerpendicularMoversMeetMidStepAtQuarterResolution) {
    // Bodies touch at t=0 and overlap at the midpoints of both moves.
    const auto rm = grid(3, 3, 4);
    const TeamPlan plan{{{0, {at(rm, 0, 0), at(rm, 1, 0)}}, {1, {at(rm, 2, 2), at(rm, 2, 1)}}}};
    const auto c = find_first_conflict(plan, rm);
    ASSERT_TRUE(c);
    EXPECT_EQ(c->kind, ConflictKind::Edge);
    EXPECT_EQ(c->timestep, 0);
    EXPECT_EQ(c->loc_b, (AgentLocation{at(rm, 2, 2), at(rm, 2, 1)}));
}

TEST(FindFirstConflict, DistinctOverlappingVerticesAtQuarterResolution) {
    const auto rm = grid(3, 3, 4);
    const TeamPlan plan{{{0, {at(rm, 0, 0)}}, {1, {at(rm, 1, 0)}}}};
    const auto c = find_first_conflict(plan, rm);
    ASSERT_TRUE(c);
    EXPECT_EQ(c->kind, ConflictKind::Vertex);
    EXPECT_NE(c->loc_a.from, c->loc_b.from);
}

TEST(FindFirstConflict, RestAtGoalCollides) {
    const auto rm = grid(5, 1, 1);
    const TeamPlan plan{{{0, {at(rm, 0, 0), at(rm, 1, 0), at(rm, 2, 0)}},
                         {1, {at(rm, 4, 0), at(rm, 3, 0), at(rm, 3, 0), at(rm, 2, 0)}}}};
    const auto c = find_first_conflict(plan, rm);
    ASSERT_TRUE(c);
    EXPECT_EQ(c->kind, ConflictKind::Vertex);
    EXPECT_EQ(c->timestep, 3);
}

TEST(FindFirstConflict, FollowingIsAllowedAtUnitResolution) {
    const auto rm = grid(4, 1, 1);
    const TeamPlan plan{{{0, {at(rm, 1, 0), at(rm, 2, 0), at(rm, 3, 0)}}, {1, {at(rm, 0, 0), at(rm, 1, 0), at(rm, 2, 0)}}}};
    EXPECT_FALSE(find_first_conflict(plan, rm));
}

TEST(FindFirstConflict, OrderIsTimeThenVertexThenPair) {
    const auto rm = grid(5, 5, 1);
    // Agents 1 and 2 share a vertex at t=1; agents 0 and 3 swap between t=0 and t=1.
    const TeamPlan plan{{{0, {at(rm, 0, 4), at(rm, 1, 4)}},
                         {1, {at(rm, 0, 0), at(rm, 1, 0)}},
                         {2, {at(rm, 2, 0), at(rm, 1, 0)}},
                         {3, {at(rm, 1, 4), at(rm, 0, 4)}}}};
    const auto all = all_conflicts(plan, rm);
    ASSERT_EQ(all.size(), 2u);
    EXPECT_EQ(all[0].kind, ConflictKind::Edge);
    EXPECT_EQ(all[0].timestep, 0);
    EXPECT_EQ(all[1].kind, ConflictKind::Vertex);
    EXPECT_EQ(all[1].timestep, 1);
    EXPECT_EQ(*find_first_conflict(plan, rm), all[0]);
}

TEST(FindFirstConflict, SymmetricInAgentOrder) {
    const auto rm = grid(3, 3, 2);
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 200; ++trial) {
        auto walk = [&](AgentId a) {
            Path p{a, {static_cast<VertexId>(rng() % rm.vertex_count())}};
            for (int k = 0; k < 4; ++k) {
                const auto nb = rm.neighbors(p.states.back());
                const auto pick = rng() % (nb.size() + 1);
                p.states.push_back(pick == nb.size() ? p.states.back() : nb[pick]);
            }
            return p;
        };
        Path a = walk(0), b = walk(1);
        const auto c1 = find_first_conflict(TeamPlan{{a, b}}, rm);
        std::swap(a.states, b.states);
        const auto c2 = find_first_conflict(TeamPlan{{a, b}}, rm);
        ASSERT_EQ(c1.has_value(), c2.has_value());
        if (!c1) continue;
        EXPECT_EQ(c1->timestep, c2->timestep);
        EXPECT_EQ(c1->kind, c2->kind);
        EXPECT_EQ(c1->loc_a, c2->loc_b);
        EXPECT_EQ(c1->loc_b, c2->loc_a);
    }
}

TEST(ValidatePlan, SingleAgentAndSwap) {
    auto rm = std::make_shared<const GridRoadmap>(grid(4, 1, 1));
    const VertexId a = rm->vertex_at({1, 0}), b = rm->vertex_at({2, 0});
    ProblemInstance one{rm, {{0, a, b}}};
    EXPECT_TRUE(validate_plan(TeamPlan{{{0, {a, b}}}}, *rm, one).empty());

    ProblemInstance two{rm, {{0, a, b}, {1, b, a}}};
    const auto conflicts = validate_plan(TeamPlan{{{0, {a, b}}, {1, {b, a}}}}, *rm, two);
    ASSERT_GE(conflicts.size(), 1u);
    EXPECT_EQ(conflicts[0].kind, ConflictKind::Edge);
}

TEST(ValidatePlan, EndpointMismatchThrows) {
    auto rm = std::make_shared<const GridRoadmap>(grid(4, 1, 1));
    ProblemInstance inst{rm, {{0, 0, 3}}};
    EXPECT_THROW(validate_plan(TeamPlan{{{0, {0, 1, 2}}}}, *rm, inst), ValidationError);
    EXPECT_THROW(validate_plan(TeamPlan{{{0, {1, 2, 3}}}}, *rm, inst), ValidationError);
    EXPECT_THROW(validate_plan(TeamPlan{{{0, {0, 2, 3}}}}, *rm, inst), ValidationError);
    EXPECT_THROW(validate_plan(TeamPlan{}, *rm, inst), ValidationError);
}

// Every two-agent single-step pair of moves on a 3x3 unit roadmap: the geometric detector must flag
// exactly the classical same-vertex and swap conflicts.
TEST(GeometricSemantics, MatchesClassicalRulesOnThreeByThree) {
    const auto rm = grid(3, 3, 1);
    using Key = std::tuple<int, int>;  // kind, timestep
    int cases = 0;
    for (std::size_t a0 = 0; a0 < rm.vertex_count(); ++a0)
        for (std::size_t b0 = 0; b0 < rm.vertex_count(); ++b0) {
            auto options = [&](std::size_t v) {
                std::vector<VertexId> out{static_cast<VertexId>(v)};
                for (VertexId w : rm.neighbors(static_cast<VertexId>(v))) out.push_back(w);
                return out;
            };
            for (VertexId a1 : options(a0))
                for (VertexId b1 : options(b0)) {
                    ++cases;
                    const auto A0 = static_cast<VertexId>(a0), B0 = static_cast<VertexId>(b0);
                    std::set<Key> expected;
                    if (A0 == B0) expected.insert({0, 0});
                    if (a1 == b1) expected.insert({0, 1});
                    if (A0 == b1 && B0 == a1 && A0 != a1) expected.insert({1, 0});
                    std::set<Key> got;
                    for (const Conflict& c : all_conflicts(TeamPlan{{{0, {A0, a1}}, {1, {B0, b1}}}}, rm))
                        got.insert({static_cast<int>(c.kind), c.timestep});
                    EXPECT_EQ(got, expected) << a0 << "->" << a1 << " / " << b0 << "->" << b1;
                }
        }
    EXPECT_EQ(cases, 33 * 33);
}

TEST(PathsCollide, MatchesPlanScan) {
    const auto rm = grid(4, 1, 1);
    EXPECT_TRUE(paths_collide(Path{3, {1, 2}}, Path{5, {2, 1}}, rm));
    EXPECT_FALSE(paths_collide(Path{3, {0, 1}}, Path{5, {3, 2}}, rm));
}
