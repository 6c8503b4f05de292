#include "mapf_lab/solver.hpp"

#include <algorithm>
#include <cctype>
#include <memory>
#include <queue>
#include <stdexcept>

namespace mapf_lab {

std::string to_string(Strategy s) { return s == Strategy::MotionCBS ? "MotionCBS" : "PriorityCBSwP"; }

std::string to_string(Outcome o) {
    switch (o) {
        case Outcome::Solved: return "Solved";
        case Outcome::Infeasible: return "Infeasible";
        case Outcome::Timeout: return "Timeout";
        case Outcome::Exhausted: return "Exhausted";
    }
    return "Unknown";
}

namespace {
std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}
}  // namespace

Strategy parse_strategy(const std::string& text) {
    const std::string s = lower(text);
    if (s == "cbs" || s == "motion" || s == "motioncbs") return Strategy::MotionCBS;
    if (s == "cbswp" || s == "cbsw/p" || s == "priority" || s == "prioritycbswp") return Strategy::PriorityCBSwP;
    throw std::invalid_argument("unknown strategy '" + text + "' (expected cbs or cbswp)");
}

Outcome parse_outcome(const std::string& text) {
    for (Outcome o : {Outcome::Solved, Outcome::Infeasible, Outcome::Timeout, Outcome::Exhausted})
        if (to_string(o) == text) return o;
    throw std::invalid_argument("unknown outcome '" + text + "'");
}

// ---------------------------------------------------------------------------------------------
// PriorityOrder

bool PriorityOrder::contains(PriorityPair p) const { return std::find(pairs_.begin(), pairs_.end(), p) != pairs_.end(); }

std::vector<AgentId> PriorityOrder::reach(AgentId from, bool downward) const {
    std::vector<char> seen(agents_, 0);
    std::vector<AgentId> stack{from};
    std::vector<AgentId> out;
    while (!stack.empty()) {
        const AgentId a = stack.back();
        stack.pop_back();
        for (const PriorityPair& p : pairs_) {
            const AgentId src = downward ? p.higher : p.lower;
            const AgentId dst = downward ? p.lower : p.higher;
            if (src != a || seen[static_cast<std::size_t>(dst)]) continue;
            seen[static_cast<std::size_t>(dst)] = 1;
            out.push_back(dst);
            stack.push_back(dst);
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

bool PriorityOrder::precedes(AgentId higher, AgentId lower) const {
    if (higher == lower) return false;
    const auto below = reach(higher, true);
    return std::binary_search(below.begin(), below.end(), lower);
}

void PriorityOrder::add(PriorityPair p) {
    if (p.higher < 0 || p.lower < 0 || static_cast<std::size_t>(std::max(p.higher, p.lower)) >= agents_)
        throw std::out_of_range("priority pair names an unknown agent");
    if (creates_cycle(p)) throw std::logic_error("priority pair would create a cycle");
    if (!contains(p)) pairs_.push_back(p);
}

std::vector<AgentId> PriorityOrder::higher_than(AgentId agent) const { return reach(agent, false); }
std::vector<AgentId> PriorityOrder::lower_than(AgentId agent) const { return reach(agent, true); }

std::vector<AgentId> PriorityOrder::topological_order() const {
    std::vector<int> indegree(agents_, 0);
    for (const PriorityPair& p : pairs_) ++indegree[static_cast<std::size_t>(p.lower)];
    std::priority_queue<AgentId, std::vector<AgentId>, std::greater<>> ready;
    for (std::size_t a = 0; a < agents_; ++a)
        if (indegree[a] == 0) ready.push(static_cast<AgentId>(a));
    std::vector<AgentId> out;
    while (!ready.empty()) {
        const AgentId a = ready.top();
        ready.pop();
        out.push_back(a);
        for (const PriorityPair& p : pairs_)
            if (p.higher == a && --indegree[static_cast<std::size_t>(p.lower)] == 0) ready.push(p.lower);
    }
    return out;
}

// ---------------------------------------------------------------------------------------------
// Branching rules

std::array<MotionConstraint, 2> resolve_motion(const Conflict& c) {
    auto own = [&](AgentId agent, const AgentLocation& loc) {
        return c.kind == ConflictKind::Vertex ? MotionConstraint::vertex(agent, loc.from, c.timestep)
                                              : MotionConstraint::edge(agent, loc.from, loc.to, c.timestep);
    };
    return {own(c.agent_a, c.loc_a), own(c.agent_b, c.loc_b)};
}

std::array<std::optional<PriorityOrder>, 2> resolve_priority(const Conflict& c, const PriorityOrder& order) {
    const PriorityPair ab{c.agent_a, c.agent_b};
    const PriorityPair ba{c.agent_b, c.agent_a};
    if (order.contains(ab) && order.contains(ba))
        throw std::logic_error("conflicting agents already ordered both ways");
    std::array<std::optional<PriorityOrder>, 2> children;
    const std::array<PriorityPair, 2> pairs{ab, ba};
    for (std::size_t k = 0; k < 2; ++k) {
        if (order.contains(pairs[k]) || order.creates_cycle(pairs[k])) continue;
        PriorityOrder child = order;
        child.add(pairs[k]);
        children[k] = std::move(child);
    }
    return children;
}

// ---------------------------------------------------------------------------------------------
// Search

namespace {

using Clock = std::chrono::steady_clock;

struct TreeNode {
    std::size_t id = 0;
    std::optional<std::size_t> parent;
    std::vector<std::shared_ptr<const Path>> paths;
    long long cost = 0;
    std::size_t conflict_count = 0;
    std::optional<Conflict> first_conflict;
    std::optional<MotionConstraint> constraint;  // added by this node
    PriorityOrder order;
    std::optional<std::pair<AgentId, AgentId>> branch_pair;
};

struct OpenKey {
    long long cost;
    std::size_t conflicts;
    std::size_t id;
};

struct OpenOrder {
    bool operator()(const OpenKey& a, const OpenKey& b) const {
        if (a.cost != b.cost) return a.cost > b.cost;
        if (a.conflicts != b.conflicts) return a.conflicts > b.conflicts;
        return a.id > b.id;
    }
};

class ConstraintSearch {
  public:
    ConstraintSearch(const ProblemInstance& instance, Strategy strategy, const Budget& budget, const NodeObserver& observer)
        : inst_(instance), rm_(*instance.roadmap), strategy_(strategy), budget_(budget), observer_(observer) {}

    SolveResult run() {
        start_ = Clock::now();
        if (budget_.time_limit) deadline_ = start_ + *budget_.time_limit;
        SolveResult result = search();
        result.stats = stats_;
        result.stats.wall_time_s = std::chrono::duration<double>(Clock::now() - start_).count();
        return result;
    }

  private:
    enum class Replan { Ok, NoPath, Exhausted, Timeout };

    SolveResult search() {
        const std::size_t n = inst_.agent_count();
        heuristics_.reserve(n);
        for (const AgentTask& t : inst_.tasks) heuristics_.push_back(admissible_heuristic(rm_, t.goal));

        TreeNode root;
        root.order = PriorityOrder(n);
        root.paths.resize(n);
        for (std::size_t a = 0; a < n; ++a) {
            switch (plan_agent(static_cast<AgentId>(a), {}, {}, root.paths[a])) {
                case Replan::Ok: break;
                case Replan::NoPath: return {Outcome::Infeasible, std::nullopt, 0, {}};
                case Replan::Exhausted: return {Outcome::Exhausted, std::nullopt, 0, {}};
                case Replan::Timeout: return {Outcome::Timeout, std::nullopt, 0, {}};
            }
        }
        push(std::move(root));

        while (!open_.empty()) {
            if (deadline_ && Clock::now() >= *deadline_) return {Outcome::Timeout, std::nullopt, 0, {}};
            if (budget_.node_limit && stats_.nodes_expanded >= *budget_.node_limit)
                return {Outcome::Exhausted, std::nullopt, 0, {}};

            const std::size_t idx = open_.top().id;
            open_.pop();
            ++stats_.nodes_expanded;
            if (observer_) notify(idx);

            if (!nodes_[idx].first_conflict) {
                SolveResult r{Outcome::Solved, plan_of(nodes_[idx]), nodes_[idx].cost, {}};
                return r;
            }
            const Conflict conflict = *nodes_[idx].first_conflict;
            ++stats_.conflicts_resolved;
            const bool timed_out =
                strategy_ == Strategy::MotionCBS ? expand_motion(idx, conflict) : expand_priority(idx, conflict);
            if (timed_out) return {Outcome::Timeout, std::nullopt, 0, {}};
            // Expanded nodes keep their constraints and orders; their paths now live in the children.
            nodes_[idx].paths.clear();
            nodes_[idx].paths.shrink_to_fit();
        }
        return {low_level_exhausted_ ? Outcome::Exhausted : Outcome::Infeasible, std::nullopt, 0, {}};
    }

    Replan plan_agent(AgentId a, std::span<const MotionConstraint> constraints, const DynamicObstacleSet& obstacles,
                      std::shared_ptr<const Path>& out) {
        SearchLimits limits;
        limits.node_budget = budget_.low_level_node_budget;
        limits.deadline = deadline_;
        ++stats_.low_level_calls;
        LowLevelResult r = shortest_path(rm_, inst_.tasks[static_cast<std::size_t>(a)], constraints, obstacles, limits,
                                         heuristics_[static_cast<std::size_t>(a)]);
        stats_.low_level_expansions += r.expansions;
        switch (r.status) {
            case SearchStatus::Found:
                out = std::make_shared<const Path>(std::move(*r.path));
                return Replan::Ok;
            case SearchStatus::NoPath: return Replan::NoPath;
            case SearchStatus::Exhausted: low_level_exhausted_ = true; return Replan::Exhausted;
            case SearchStatus::Timeout: return Replan::Timeout;
        }
        return Replan::NoPath;
    }

    static TeamPlan plan_of(const TreeNode& node) {
        TeamPlan plan;
        plan.paths.reserve(node.paths.size());
        for (const auto& p : node.paths) plan.paths.push_back(*p);
        return plan;
    }

    void push(TreeNode node) {
        const TeamPlan plan = plan_of(node);
        node.cost = sum_of_costs(plan);
        const auto conflicts = all_conflicts(plan, rm_);
        node.conflict_count = conflicts.size();
        node.first_conflict = conflicts.empty() ? std::nullopt : std::optional<Conflict>(conflicts.front());
        node.id = nodes_.size();
        ++stats_.nodes_generated;
        open_.push({node.cost, node.conflict_count, node.id});
        nodes_.push_back(std::move(node));
    }

    std::vector<MotionConstraint> constraints_of(std::size_t idx, std::optional<AgentId> agent) const {
        std::vector<MotionConstraint> out;
        for (std::optional<std::size_t> i = idx; i; i = nodes_[*i].parent) {
            const auto& c = nodes_[*i].constraint;
            if (c && (!agent || c->agent == *agent)) out.push_back(*c);
        }
        std::reverse(out.begin(), out.end());
        return out;
    }

    bool expand_motion(std::size_t idx, const Conflict& conflict) {
        for (const MotionConstraint& added : resolve_motion(conflict)) {
            auto constraints = constraints_of(idx, added.agent);
            if (std::find(constraints.begin(), constraints.end(), added) != constraints.end()) continue;
            constraints.push_back(added);

            TreeNode child;
            child.parent = idx;
            child.paths = nodes_[idx].paths;
            child.constraint = added;
            child.order = nodes_[idx].order;
            child.branch_pair = std::make_pair(conflict.agent_a, conflict.agent_b);
            const Replan r = plan_agent(added.agent, constraints, {}, child.paths[static_cast<std::size_t>(added.agent)]);
            if (r == Replan::Timeout) return true;
            if (r != Replan::Ok) continue;
            push(std::move(child));
        }
        return false;
    }

    bool expand_priority(std::size_t idx, const Conflict& conflict) {
        const auto children = resolve_priority(conflict, nodes_[idx].order);
        const std::array<AgentId, 2> lowered{conflict.agent_b, conflict.agent_a};
        for (std::size_t k = 0; k < 2; ++k) {
            if (!children[k]) continue;
            TreeNode child;
            child.parent = idx;
            child.paths = nodes_[idx].paths;
            child.order = *children[k];
            child.branch_pair = std::make_pair(conflict.agent_a, conflict.agent_b);

            const Replan r = enforce_order(child, lowered[k]);
            if (r == Replan::Timeout) return true;
            if (r != Replan::Ok) continue;
            push(std::move(child));
        }
        return false;
    }

    // Replans `lowered` and, in topological order, every agent below it that now overlaps some
    // strictly-higher agent. Each replanned agent treats all agents above it as moving obstacles.
    Replan enforce_order(TreeNode& node, AgentId lowered) {
        const PriorityOrder& order = node.order;
        auto below = order.lower_than(lowered);
        std::vector<char> candidate(inst_.agent_count(), 0);
        candidate[static_cast<std::size_t>(lowered)] = 1;
        for (AgentId a : below) candidate[static_cast<std::size_t>(a)] = 1;

        for (const AgentId a : order.topological_order()) {
            if (!candidate[static_cast<std::size_t>(a)]) continue;
            const auto higher = order.higher_than(a);
            const Path& mine = *node.paths[static_cast<std::size_t>(a)];
            bool must_replan = a == lowered;
            for (std::size_t i = 0; i < higher.size() && !must_replan; ++i)
                must_replan = paths_collide(mine, *node.paths[static_cast<std::size_t>(higher[i])], rm_);
            if (!must_replan) continue;

            DynamicObstacleSet obstacles;
            obstacles.paths.reserve(higher.size());
            for (AgentId h : higher) obstacles.paths.push_back(node.paths[static_cast<std::size_t>(h)].get());
            const Replan r = plan_agent(a, {}, obstacles, node.paths[static_cast<std::size_t>(a)]);
            if (r != Replan::Ok) return r;
        }
        return Replan::Ok;
    }

    void notify(std::size_t idx) {
        const TreeNode& node = nodes_[idx];
        const TeamPlan plan = plan_of(node);
        const auto constraints = constraints_of(idx, std::nullopt);
        std::vector<std::pair<AgentId, AgentId>> pairs;
        for (std::optional<std::size_t> i = idx; i; i = nodes_[*i].parent)
            if (nodes_[*i].branch_pair) pairs.push_back(*nodes_[*i].branch_pair);
        std::reverse(pairs.begin(), pairs.end());

        NodeSnapshot snap;
        snap.id = node.id;
        snap.parent = node.parent;
        snap.cost = node.cost;
        snap.conflict_count = node.conflict_count;
        snap.plan = &plan;
        snap.constraints = constraints;
        snap.priorities = &node.order;
        snap.branch_pairs = pairs;
        observer_(snap);
    }

    const ProblemInstance& inst_;
    const GridRoadmap& rm_;
    Strategy strategy_;
    Budget budget_;
    const NodeObserver& observer_;

    Clock::time_point start_;
    std::optional<Clock::time_point> deadline_;
    std::vector<std::vector<int>> heuristics_;
    std::vector<TreeNode> nodes_;
    std::priority_queue<OpenKey, std::vector<OpenKey>, OpenOrder> open_;
    SolveStats stats_;
    bool low_level_exhausted_ = false;
};

}  // namespace

SolveResult solve(const ProblemInstance& instance, Strategy strategy, const Budget& budget, const NodeObserver& observer) {
    check_instance(instance);
    return ConstraintSearch(instance, strategy, budget, observer).run();
}

}  // namespace mapf_lab
