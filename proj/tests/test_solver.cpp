#include <gtest/gtest.h>

#include <random>
#include <set>

#include "mapf_lab/conflict.hpp"
#include "mapf_lab/grid_map.hpp"
#include "mapf_lab/solver.hpp"
#include "support/oracles.hpp"
#include "test_data.hpp"

using namespace mapf_lab;

namespace {

std::shared_ptr<const GridRoadmap> roadmap(const GridMap& m, int r = 1) {
    return std::make_shared<const GridRoadmap>(build_roadmap(m, r));
}

GridMap from_rows(const std::vector<std::string>& rows) {
    const int h = static_cast<int>(rows.size()), w = static_cast<int>(rows[0].size());
    std::vector<bool> blocked;
    for (const auto& row : rows)
        for (char ch : row) blocked.push_back(ch == '@');
    return GridMap(w, h, blocked);
}

Conflict vertex_conflict(AgentId a, AgentId b, VertexId va, VertexId vb, Timestep t) {
    return Conflict{ConflictKind::Vertex, a, b, {va, va}, {vb, vb}, t};
}

}  // namespace

TEST(Strategy, NamesRoundTrip) {
    EXPECT_EQ(parse_strategy("cbs"), Strategy::MotionCBS);
    EXPECT_EQ(parse_strategy("CBSwP"), Strategy::PriorityCBSwP);
    EXPECT_EQ(parse_strategy(to_string(Strategy::PriorityCBSwP)), Strategy::PriorityCBSwP);
    EXPECT_THROW(parse_strategy("pbs"), std::invalid_argument);
    for (Outcome o : {Outcome::Solved, Outcome::Infeasible, Outcome::Timeout, Outcome::Exhausted})
        EXPECT_EQ(parse_outcome(to_string(o)), o);
}

TEST(PriorityOrder, TransitiveQueriesAndCycles) {
    PriorityOrder order(4);
    order.add({1, 2});
    order.add({2, 3});
    EXPECT_TRUE(order.precedes(1, 3));
    EXPECT_FALSE(order.precedes(3, 1));
    EXPECT_TRUE(order.creates_cycle({3, 1}));
    EXPECT_FALSE(order.creates_cycle({0, 3}));
    EXPECT_THROW(order.add({3, 1}), std::logic_error);
    EXPECT_EQ(order.higher_than(3), (std::vector<AgentId>{1, 2}));
    EXPECT_EQ(order.lower_than(1), (std::vector<AgentId>{2, 3}));
    EXPECT_EQ(order.topological_order(), (std::vector<AgentId>{0, 1, 2, 3}));
    order.add({3, 0});
    EXPECT_EQ(order.topological_order(), (std::vector<AgentId>{1, 2, 3, 0}));
}

TEST(ResolveMotion, EachAgentLosesItsOwnLocation) {
    const auto c = resolve_motion(vertex_conflict(1, 2, 7, 7, 4));
    EXPECT_EQ(c[0], MotionConstraint::vertex(1, 7, 4));
    EXPECT_EQ(c[1], MotionConstraint::vertex(2, 7, 4));

    const Conflict swap{ConflictKind::Edge, 0, 3, {5, 6}, {6, 5}, 2};
    const auto e = resolve_motion(swap);
    EXPECT_EQ(e[0], MotionConstraint::edge(0, 5, 6, 2));
    EXPECT_EQ(e[1], MotionConstraint::edge(3, 6, 5, 2));

    const auto d = resolve_motion(vertex_conflict(0, 1, 10, 11, 3));
    EXPECT_EQ(d[0], MotionConstraint::vertex(0, 10, 3));
    EXPECT_EQ(d[1], MotionConstraint::vertex(1, 11, 3));
}

TEST(ResolvePriority, BothOrdersUnderEmptyOrder) {
    const auto kids = resolve_priority(vertex_conflict(1, 2, 0, 0, 3), PriorityOrder(3));
    ASSERT_TRUE(kids[0] && kids[1]);
    EXPECT_TRUE(kids[0]->precedes(1, 2));
    EXPECT_TRUE(kids[1]->precedes(2, 1));
}

TEST(ResolvePriority, CyclicChildIsDiscarded) {
    PriorityOrder order(3);
    order.add({1, 2});
    const auto kids = resolve_priority(vertex_conflict(1, 2, 0, 0, 3), order);
    EXPECT_FALSE(kids[1]);
}

TEST(ResolvePriority, TransitiveOrderKeepsOnlyTheConsistentChild) {
    PriorityOrder order(3);
    order.add({0, 1});
    order.add({1, 2});
    const auto kids = resolve_priority(vertex_conflict(0, 2, 0, 0, 1), order);
    ASSERT_TRUE(kids[0]);
    EXPECT_FALSE(kids[1]);
}

TEST(Solve, IndependentAgentsSolveAtRoot) {
    auto rm = roadmap(GridMap::empty(5, 2));
    ProblemInstance inst{rm, {{0, rm->vertex_at({0, 0}), rm->vertex_at({4, 0})}, {1, rm->vertex_at({0, 1}), rm->vertex_at({4, 1})}}};
    for (Strategy s : {Strategy::MotionCBS, Strategy::PriorityCBSwP}) {
        const SolveResult r = solve(inst, s);
        ASSERT_EQ(r.outcome, Outcome::Solved);
        EXPECT_EQ(r.cost, 8);
        EXPECT_EQ(r.stats.conflicts_resolved, 0u);
        EXPECT_EQ(r.stats.nodes_expanded, 1u);
    }
}

TEST(Solve, HeadOnInCorridorWithBay) {
    // Corridor of length 3 with one side bay so the agents can pass.
    const GridMap m = from_rows({"...", "@.@"});
    auto rm = roadmap(m);
    ProblemInstance inst{rm, {{0, rm->vertex_at({0, 0}), rm->vertex_at({2, 0})}, {1, rm->vertex_at({2, 0}), rm->vertex_at({0, 0})}}};
    const SolveResult r = solve(inst, Strategy::MotionCBS);
    ASSERT_EQ(r.outcome, Outcome::Solved);
    EXPECT_GT(r.cost, 4);
    EXPECT_EQ(r.cost, *oracle::joint_optimal_cost(*rm, inst.tasks));
    EXPECT_TRUE(validate_plan(*r.plan, *rm, inst).empty());
}

TEST(Solve, HeadOnInClosedCorridorIsInfeasible) {
    auto rm = roadmap(GridMap::empty(3, 1));
    ProblemInstance inst{rm, {{0, 0, 2}, {1, 2, 0}}};
    // Both priority children leave the lower agent without a path, so the tree empties.
    EXPECT_EQ(solve(inst, Strategy::PriorityCBSwP).outcome, Outcome::Infeasible);
    // Motion constraints can always be postponed by waiting; the tree never empties.
    Budget budget;
    budget.node_limit = 200;
    EXPECT_EQ(solve(inst, Strategy::MotionCBS, budget).outcome, Outcome::Exhausted);
}

TEST(Solve, UnreachableGoalIsInfeasibleAtRoot) {
    auto rm = roadmap(from_rows({".@."}));
    ProblemInstance inst{rm, {{0, rm->vertex_at({0, 0}), rm->vertex_at({2, 0})}}};
    const SolveResult r = solve(inst, Strategy::MotionCBS);
    EXPECT_EQ(r.outcome, Outcome::Infeasible);
    EXPECT_FALSE(r.plan);
}

TEST(Solve, BudgetsProduceTimeoutAndExhausted) {
    auto rm = roadmap(load_map(test_data::map("empty-8-8")));
    const auto pairs = load_scenario(test_data::scen("empty-8-8", 1), rm->source_map());
    const ProblemInstance inst = make_instance(rm, pairs, 24);
    Budget nodes;
    nodes.node_limit = 5;
    const SolveResult a = solve(inst, Strategy::MotionCBS, nodes);
    EXPECT_EQ(a.outcome, Outcome::Exhausted);
    EXPECT_LE(a.stats.nodes_expanded, 5u);
    Budget time;
    time.time_limit = std::chrono::milliseconds(1);
    EXPECT_EQ(solve(inst, Strategy::MotionCBS, time).outcome, Outcome::Timeout);
}

TEST(Solve, ChainOfPrioritiesKeepsLowerAgentsClear) {
    // Three agents crossing in a small room; every expanded node must respect its order.
    auto rm = roadmap(GridMap::empty(4, 4));
    ProblemInstance inst{rm,
                         {{0, rm->vertex_at({0, 1}), rm->vertex_at({3, 1})},
                          {1, rm->vertex_at({1, 0}), rm->vertex_at({1, 3})},
                          {2, rm->vertex_at({3, 2}), rm->vertex_at({0, 1})}}};
    std::size_t checked = 0;
    const SolveResult r = solve(inst, Strategy::PriorityCBSwP, {}, [&](const NodeSnapshot& s) {
        const auto& order = *s.priorities;
        for (AgentId lo = 0; lo < 3; ++lo)
            for (AgentId hi : order.higher_than(lo)) {
                ++checked;
                EXPECT_FALSE(paths_collide(s.plan->paths[static_cast<std::size_t>(lo)],
                                           s.plan->paths[static_cast<std::size_t>(hi)], *rm));
            }
    });
    ASSERT_EQ(r.outcome, Outcome::Solved);
    EXPECT_TRUE(validate_plan(*r.plan, *rm, inst).empty());
    EXPECT_GT(checked, 0u);
}

TEST(Solve, MotionConstraintsAreObeyedInEveryNode) {
    auto rm = roadmap(GridMap::empty(4, 4), 2);
    std::mt19937_64 rng(3);
    const auto tasks = oracle::random_tasks(*rm, 4, rng);
    ASSERT_TRUE(tasks);
    ProblemInstance inst{rm, *tasks};
    const SolveResult r = solve(inst, Strategy::MotionCBS, {}, [&](const NodeSnapshot& s) {
        for (const Path& p : s.plan->paths) EXPECT_TRUE(violated_constraints(p, s.constraints).empty());
    });
    ASSERT_EQ(r.outcome, Outcome::Solved);
    EXPECT_TRUE(validate_plan(*r.plan, *rm, inst).empty());
}

TEST(Solve, EmptyEightByEightTwelveAgents) {
    auto rm = roadmap(load_map(test_data::map("empty-8-8")));
    const auto pairs = load_scenario(test_data::scen("empty-8-8", 1), rm->source_map());
    const ProblemInstance inst = make_instance(rm, pairs, 12);
    Budget b;
    b.time_limit = std::chrono::seconds(30);
    const SolveResult cbs = solve(inst, Strategy::MotionCBS, b);
    const SolveResult pri = solve(inst, Strategy::PriorityCBSwP, b);
    ASSERT_EQ(cbs.outcome, Outcome::Solved);
    ASSERT_EQ(pri.outcome, Outcome::Solved);
    EXPECT_GE(pri.cost, cbs.cost);
    EXPECT_TRUE(validate_plan(*cbs.plan, *rm, inst).empty());
    EXPECT_TRUE(validate_plan(*pri.plan, *rm, inst).empty());
}

// CBS may run out of budget on a feasible instance, but whatever it returns must be optimal.
TEST(Solve, MatchesJointOptimumOnSmallInstances) {
    std::mt19937_64 rng(5);
    int checked = 0;
    for (int trial = 0; trial < 40; ++trial) {
        auto rm = roadmap(oracle::random_grid(5, 5, 0.2, rng));
        const auto tasks = oracle::random_tasks(*rm, 2 + trial % 2, rng);
        if (!tasks) continue;
        ProblemInstance inst{rm, *tasks};
        const auto want = oracle::joint_optimal_cost(*rm, *tasks);
        Budget budget;
        budget.node_limit = 20000;  // without one, CBS never stops on an infeasible instance
        const SolveResult got = solve(inst, Strategy::MotionCBS, budget);
        if (got.outcome != Outcome::Solved) {
            if (got.outcome == Outcome::Infeasible) EXPECT_FALSE(want) << trial;
            continue;
        }
        ASSERT_TRUE(want) << trial;
        EXPECT_EQ(got.cost, *want) << trial;
        ++checked;
    }
    EXPECT_GT(checked, 20);
}

TEST(Solve, RejectsMalformedInstances) {
    auto rm = roadmap(GridMap::empty(3, 1));
    EXPECT_THROW(solve(ProblemInstance{rm, {{0, 0, 2}, {1, 0, 1}}}, Strategy::MotionCBS), ValidationError);
    EXPECT_THROW(solve(ProblemInstance{rm, {{1, 0, 2}}}, Strategy::MotionCBS), ValidationError);
}
