#pragma once

#include <array>
#include <chrono>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mapf_lab/conflict.hpp"
#include "mapf_lab/low_level.hpp"
#include "mapf_lab/plan.hpp"
#include "mapf_lab/roadmap.hpp"

namespace mapf_lab {

enum class Strategy {
    MotionCBS,      ///< conservative: branch on per-agent motion constraints
    PriorityCBSwP,  ///< aggressive: branch on pairwise priority orderings
};

enum class Outcome { Solved, Infeasible, Timeout, Exhausted };

std::string to_string(Strategy s);
std::string to_string(Outcome o);
/// Accepts "cbs"/"motion" and "cbswp"/"priority" (case-insensitive) as well as the enum names.
Strategy parse_strategy(const std::string& text);
Outcome parse_outcome(const std::string& text);

struct Budget {
    std::optional<std::chrono::milliseconds> time_limit;
    /// Maximum high-level expansions.
    std::optional<std::size_t> node_limit;
    /// Per low-level call.
    std::size_t low_level_node_budget = 50'000'000;
};

struct SolveStats {
    std::size_t nodes_expanded = 0;
    std::size_t nodes_generated = 0;
    std::size_t conflicts_resolved = 0;
    std::size_t low_level_calls = 0;
    std::size_t low_level_expansions = 0;
    double wall_time_s = 0.0;
};

struct SolveResult {
    Outcome outcome = Outcome::Infeasible;
    std::optional<TeamPlan> plan;  // present iff outcome == Solved
    long long cost = 0;            // sum of costs when solved
    SolveStats stats;
};

struct PriorityPair {
    AgentId higher = 0;
    AgentId lower = 0;
    friend bool operator==(const PriorityPair&, const PriorityPair&) = default;
};

/// Strict partial order over agents, kept acyclic by construction.
class PriorityOrder {
  public:
    PriorityOrder() = default;
    explicit PriorityOrder(std::size_t agents) : agents_(agents) {}

    std::size_t agent_count() const noexcept { return agents_; }
    std::span<const PriorityPair> pairs() const noexcept { return pairs_; }
    bool contains(PriorityPair p) const;
    /// `higher` is transitively above `lower`.
    bool precedes(AgentId higher, AgentId lower) const;
    /// Adding the pair would close a cycle.
    bool creates_cycle(PriorityPair p) const { return p.higher == p.lower || precedes(p.lower, p.higher); }
    /// Throws std::logic_error if the pair would create a cycle.
    void add(PriorityPair p);

    /// Agents strictly above / below `agent`, ascending ids.
    std::vector<AgentId> higher_than(AgentId agent) const;
    std::vector<AgentId> lower_than(AgentId agent) const;
    /// All agents in a topological order (higher first), smallest id first among ready agents.
    std::vector<AgentId> topological_order() const;

  private:
    std::vector<AgentId> reach(AgentId from, bool downward) const;

    std::size_t agents_ = 0;
    std::vector<PriorityPair> pairs_;
};

/// Children of a motion-constrained branch: each agent is denied its own location at the conflict.
std::array<MotionConstraint, 2> resolve_motion(const Conflict& conflict);

/// Children of a priority branch: [0] adds agent_a above agent_b, [1] the reverse. A child whose order
/// would become cyclic is nullopt. Throws std::logic_error when both orderings of the pair already
/// hold, since such agents can no longer conflict in a consistent node.
std::array<std::optional<PriorityOrder>, 2> resolve_priority(const Conflict& conflict, const PriorityOrder& order);

/// What the search exposes about a node when it is expanded.
struct NodeSnapshot {
    std::size_t id = 0;
    std::optional<std::size_t> parent;
    long long cost = 0;
    std::size_t conflict_count = 0;
    const TeamPlan* plan = nullptr;
    /// All motion constraints from the root to this node (MotionCBS only).
    std::span<const MotionConstraint> constraints;
    const PriorityOrder* priorities = nullptr;
    /// Unordered agent pairs branched on from the root down to this node, root first.
    std::span<const std::pair<AgentId, AgentId>> branch_pairs;
};

using NodeObserver = std::function<void(const NodeSnapshot&)>;

/// Best-first constraint-tree search. The root plans every agent alone; each expansion pops the
/// lowest-cost node (ties: fewer conflicts, then lower id), returns its plan when conflict-free, and
/// otherwise splits on the first conflict using the strategy's resolution step.
SolveResult solve(const ProblemInstance& instance, Strategy strategy, const Budget& budget = {},
                  const NodeObserver& observer = {});

}  // namespace mapf_lab
