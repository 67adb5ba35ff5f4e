#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "advopt/costs.hpp"
#include "advopt/plans.hpp"
#include "advopt/topology.hpp"

namespace advopt {

/// Decision weights of one agent; alpha + beta = 1.
struct Behavior {
    double alpha = 1.0;
    double beta = 0.0;
};

/// Per-agent severity weights, indexed by AgentId. Legitimate agents have beta = 0.
class BehaviorProfile {
public:
    BehaviorProfile() = default;
    explicit BehaviorProfile(std::vector<double> betas);

    static BehaviorProfile all_legitimate(std::size_t n) { return BehaviorProfile(std::vector<double>(n, 0.0)); }

    std::size_t size() const noexcept { return betas_.size(); }
    Behavior operator[](AgentId a) const { return {1.0 - betas_.at(a), betas_.at(a)}; }
    double beta(AgentId a) const { return betas_.at(a); }
    double alpha(AgentId a) const { return 1.0 - betas_.at(a); }
    bool is_adversary(AgentId a) const { return betas_.at(a) > 0.0; }

    std::vector<AgentId> legitimate_agents() const;
    std::vector<AgentId> adversary_agents() const;
    double mean_alpha() const { return 1.0 - mean_beta(); }
    double mean_beta() const;

    bool operator==(const BehaviorProfile&) const = default;

private:
    std::vector<double> betas_;
};

enum class InitialSelection { FirstPlan, Random };

struct RunConfig {
    std::size_t max_iterations = 40;
    InefficiencyFn inefficiency = InefficiencyFn::variance();
    std::uint64_t rng_seed = 0;
    InitialSelection initial_selection = InitialSelection::FirstPlan;
    /// Parents accept or reject each child branch's new selections during the
    /// bottom-up pass. When false only the root's whole-iteration check applies.
    bool branch_approval = true;
};

struct RunOutcome {
    std::vector<std::size_t> selections;        // plan index per agent
    GlobalResponse global_response;
    double global_inefficiency = 0.0;
    std::vector<double> discomfort_per_agent;
    std::size_t iterations_used = 0;
    /// Global inefficiency of the accepted state after each iteration; entry 0 is the initial state.
    std::vector<double> inefficiency_trace;
    /// Combined global cost of the accepted state after each iteration; entry 0 is the initial state.
    std::vector<double> cost_trace;
    /// Final subtree aggregate responses, indexed by Position.
    std::vector<std::vector<double>> subtree_aggregates;
    double mean_alpha = 1.0;
    double mean_beta = 0.0;

    double mean_discomfort() const;
    bool operator==(const RunOutcome&) const = default;
};

/// Weighted argmin over the agent's plans of alpha*I + beta*D, with both terms
/// min-max normalized across the k candidates. `context_response` must exclude
/// the agent's own contribution. Ties go to the lowest plan index.
std::size_t select_plan(const PlanSet& agent, Behavior behavior, std::span<const double> context_response,
                        std::span<const double> context_discomforts, const InefficiencyFn& ineff);

/// Iterative hierarchical plan selection over the tree: bottom-up selection and
/// aggregation, then an atomic accept-or-revert decision at the root.
RunOutcome run(const TreeTopology& topology, std::span<const PlanSet> plan_sets, const BehaviorProfile& behavior,
               const RunConfig& config);

/// run() with every agent legitimate.
RunOutcome run_baseline(const TreeTopology& topology, std::span<const PlanSet> plan_sets, const RunConfig& config);

}  // namespace advopt
