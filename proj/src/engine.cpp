#include "advopt/engine.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <random>
#include <string>

#include "advopt/error.hpp"
#include "advopt/rng.hpp"

namespace advopt {

BehaviorProfile::BehaviorProfile(std::vector<double> betas) : betas_(std::move(betas)) {
    for (double b : betas_)
        if (!(b >= 0.0 && b <= 1.0)) throw Error(ErrorKind::InvalidInput, "beta must lie in [0, 1]");
}

std::vector<AgentId> BehaviorProfile::legitimate_agents() const {
    std::vector<AgentId> out;
    for (AgentId a = 0; a < betas_.size(); ++a)
        if (!is_adversary(a)) out.push_back(a);
    return out;
}

std::vector<AgentId> BehaviorProfile::adversary_agents() const {
    std::vector<AgentId> out;
    for (AgentId a = 0; a < betas_.size(); ++a)
        if (is_adversary(a)) out.push_back(a);
    return out;
}

double BehaviorProfile::mean_beta() const {
    if (betas_.empty()) return 0.0;
    return std::accumulate(betas_.begin(), betas_.end(), 0.0) / static_cast<double>(betas_.size());
}

double RunOutcome::mean_discomfort() const {
    return discomfort_per_agent.empty() ? 0.0 : aggregate_discomfort(discomfort_per_agent);
}

namespace {

void normalize_min_max(std::vector<double>& v) {
    auto [lo, hi] = std::minmax_element(v.begin(), v.end());
    const double min = *lo;
    const double range = *hi - min;
    for (auto& x : v) x = range > 0 ? (x - min) / range : 0.0;
}

// Core of select_plan. Discomfort context is passed as (sum, count) of the other agents.
std::size_t choose(const PlanSet& agent, Behavior behavior, std::span<const double> context,
                   double context_discomfort_sum, std::size_t context_count, const InefficiencyFn& ineff,
                   std::vector<double>& scratch) {
    const std::size_t k = agent.size();
    if (k == 0) throw Error(ErrorKind::InvalidSize, "agent has no plans");
    if (k == 1) return 0;

    std::vector<double> ineff_terms(k), discomfort_terms(k);
    scratch.resize(context.size());
    for (std::size_t i = 0; i < k; ++i) {
        const auto& values = agent.plans[i].values;
        if (values.size() != context.size())
            throw Error(ErrorKind::DimensionMismatch, "plan length " + std::to_string(values.size()) +
                                                          " != context length " + std::to_string(context.size()));
        for (std::size_t j = 0; j < values.size(); ++j) scratch[j] = context[j] + values[j];
        ineff_terms[i] = behavior.alpha > 0 ? ineff(scratch) : 0.0;
        discomfort_terms[i] =
            (context_discomfort_sum + agent.plans[i].discomfort) / static_cast<double>(context_count + 1);
    }
    normalize_min_max(ineff_terms);
    normalize_min_max(discomfort_terms);

    std::size_t best = 0;
    double best_score = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < k; ++i) {
        const double score = behavior.alpha * ineff_terms[i] + behavior.beta * discomfort_terms[i];
        if (score < best_score) {
            best_score = score;
            best = i;
        }
    }
    return best;
}

void add_into(std::vector<double>& acc, std::span<const double> v) {
    for (std::size_t j = 0; j < acc.size(); ++j) acc[j] += v[j];
}

// Joint decision of a parent: accept or reject each child's new branch and pick
// its own plan. Candidates are ordered accept-all first, then by plan index, so
// ties keep children's updates and prefer low plan indices. Both cost terms are
// min-max normalized over all candidates. Returns (reject bitmask, plan index).
std::pair<std::size_t, std::size_t> approve_and_choose(
    const PlanSet& agent, Behavior behavior, std::span<const double> outside, double outside_discomfort,
    std::size_t population, std::span<const Position> children,
    const std::vector<std::vector<double>>& new_aggregate, const std::vector<double>& new_discomfort,
    const std::vector<std::vector<double>>& old_aggregate, const std::vector<double>& old_discomfort,
    const InefficiencyFn& ineff, std::vector<double>& scratch) {
    const std::size_t k = agent.size();
    const std::size_t masks = std::size_t{1} << children.size();
    const std::size_t d = outside.size();
    std::vector<double> ineff_terms(masks * k), discomfort_terms(masks * k);
    std::vector<double> base(d);
    scratch.resize(d);
    for (std::size_t mask = 0; mask < masks; ++mask) {
        std::copy(outside.begin(), outside.end(), base.begin());
        double base_discomfort = outside_discomfort;
        for (std::size_t ci = 0; ci < children.size(); ++ci) {
            const Position c = children[ci];
            const bool reject = (mask >> ci) & 1U;
            add_into(base, reject ? old_aggregate[c] : new_aggregate[c]);
            base_discomfort += reject ? old_discomfort[c] : new_discomfort[c];
        }
        for (std::size_t i = 0; i < k; ++i) {
            const auto& values = agent.plans[i].values;
            if (values.size() != d)
                throw Error(ErrorKind::DimensionMismatch, "plan length " + std::to_string(values.size()) +
                                                              " != context length " + std::to_string(d));
            for (std::size_t j = 0; j < d; ++j) scratch[j] = base[j] + values[j];
            ineff_terms[mask * k + i] = behavior.alpha > 0 ? ineff(scratch) : 0.0;
            discomfort_terms[mask * k + i] =
                (base_discomfort + agent.plans[i].discomfort) / static_cast<double>(population);
        }
    }
    normalize_min_max(ineff_terms);
    normalize_min_max(discomfort_terms);

    std::size_t best = 0;
    double best_score = std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < ineff_terms.size(); ++c) {
        const double score = behavior.alpha * ineff_terms[c] + behavior.beta * discomfort_terms[c];
        if (score < best_score) {
            best_score = score;
            best = c;
        }
    }
    return {best / k, best % k};
}

}  // namespace

std::size_t select_plan(const PlanSet& agent, Behavior behavior, std::span<const double> context_response,
                        std::span<const double> context_discomforts, const InefficiencyFn& ineff) {
    const double sum = std::accumulate(context_discomforts.begin(), context_discomforts.end(), 0.0);
    std::vector<double> scratch;
    return choose(agent, behavior, context_response, sum, context_discomforts.size(), ineff, scratch);
}

RunOutcome run(const TreeTopology& topology, std::span<const PlanSet> plan_sets, const BehaviorProfile& behavior,
               const RunConfig& config) {
    const std::size_t n = topology.node_count();
    if (plan_sets.size() != n)
        throw Error(ErrorKind::Configuration, std::to_string(plan_sets.size()) + " plan sets for a tree of " +
                                                  std::to_string(n) + " agents");
    if (behavior.size() != n)
        throw Error(ErrorKind::Configuration, "behavior profile size " + std::to_string(behavior.size()) +
                                                  " != " + std::to_string(n));
    if (config.max_iterations == 0) throw Error(ErrorKind::Configuration, "max_iterations must be >= 1");
    try {
        validate_plan_sets(plan_sets);
    } catch (const Error& e) {
        throw Error(ErrorKind::Configuration, e.what());
    }
    const std::size_t d = plan_sets.front().dim();

    // Accepted state.
    std::vector<std::size_t> selection(n, 0);
    if (config.initial_selection == InitialSelection::Random) {
        Rng rng(config.rng_seed);
        for (AgentId a = 0; a < n; ++a)
            selection[a] = std::uniform_int_distribution<std::size_t>(0, plan_sets[a].size() - 1)(rng);
    }
    auto plan_of = [&](AgentId a, std::size_t i) -> const Plan& { return plan_sets[a].plans[i]; };

    std::vector<std::vector<double>> aggregate(n, std::vector<double>(d, 0.0));
    std::vector<double> subtree_discomfort(n, 0.0);
    for (Position p = n; p-- > 0;) {
        const AgentId a = topology.agent_at(p);
        const Plan& plan = plan_of(a, selection[a]);
        aggregate[p].assign(plan.values.begin(), plan.values.end());
        subtree_discomfort[p] = plan.discomfort;
        for (Position c : topology.children_of(p)) {
            add_into(aggregate[p], aggregate[c]);
            subtree_discomfort[p] += subtree_discomfort[c];
        }
    }

    double max_discomfort_mean = 0.0;
    for (const auto& set : plan_sets) {
        double m = 0.0;
        for (const auto& plan : set.plans) m = std::max(m, plan.discomfort);
        max_discomfort_mean += m;
    }
    max_discomfort_mean /= static_cast<double>(n);
    const double discomfort_ref = max_discomfort_mean > 0 ? max_discomfort_mean : 1.0;

    const double mean_alpha = behavior.mean_alpha();
    const double mean_beta = behavior.mean_beta();
    const double initial_ineff = config.inefficiency(aggregate[0]);
    const double ineff_ref = initial_ineff > 0 ? initial_ineff : 1.0;
    auto combined = [&](double ineff, double discomfort_sum) {
        return mean_alpha * ineff / ineff_ref + mean_beta * (discomfort_sum / static_cast<double>(n)) / discomfort_ref;
    };

    RunOutcome out;
    out.mean_alpha = mean_alpha;
    out.mean_beta = mean_beta;
    double current_ineff = initial_ineff;
    double current_cost = combined(initial_ineff, subtree_discomfort[0]);
    out.inefficiency_trace.push_back(current_ineff);
    out.cost_trace.push_back(current_cost);

    std::vector<std::size_t> next_selection(n);
    std::vector<std::vector<double>> next_aggregate(n, std::vector<double>(d));
    std::vector<double> next_subtree_discomfort(n);
    std::vector<double> context(d), outside(d), scratch;
    std::vector<char> rejected(n, 0);

    for (std::size_t iter = 1; iter <= config.max_iterations; ++iter) {
        out.iterations_used = iter;
        const std::vector<double>& global_prev = aggregate[0];
        const double discomfort_total_prev = subtree_discomfort[0];

        // Bottom-up: leaves first, each agent sees its children's fresh aggregates
        // plus last iteration's view of everything outside its subtree.
        std::fill(rejected.begin(), rejected.end(), 0);
        for (Position p = n; p-- > 0;) {
            const AgentId a = topology.agent_at(p);
            const auto children = topology.children_of(p);
            for (std::size_t j = 0; j < d; ++j) outside[j] = global_prev[j] - aggregate[p][j];
            const double outside_discomfort = discomfort_total_prev - subtree_discomfort[p];

            std::size_t reject_mask = 0;
            std::size_t choice = 0;
            if (config.branch_approval && !children.empty()) {
                auto decision = approve_and_choose(plan_sets[a], behavior[a], outside, outside_discomfort, n, children,
                                                   next_aggregate, next_subtree_discomfort, aggregate,
                                                   subtree_discomfort, config.inefficiency, scratch);
                reject_mask = decision.first;
                choice = decision.second;
            } else {
                double child_discomfort = 0.0;
                std::copy(outside.begin(), outside.end(), context.begin());
                for (Position c : children) {
                    add_into(context, next_aggregate[c]);
                    child_discomfort += next_subtree_discomfort[c];
                }
                choice = choose(plan_sets[a], behavior[a], context, outside_discomfort + child_discomfort, n - 1,
                                config.inefficiency, scratch);
            }

            std::vector<double>& agg = next_aggregate[p];
            const Plan& own = plan_of(a, choice);
            agg.assign(own.values.begin(), own.values.end());
            next_subtree_discomfort[p] = own.discomfort;
            next_selection[a] = choice;
            for (std::size_t ci = 0; ci < children.size(); ++ci) {
                const Position c = children[ci];
                const bool reject = (reject_mask >> ci) & 1U;
                rejected[c] = reject;
                add_into(agg, reject ? aggregate[c] : next_aggregate[c]);
                next_subtree_discomfort[p] += reject ? subtree_discomfort[c] : next_subtree_discomfort[c];
            }
        }

        // Top-down: rejected branches revert to the previous iteration's selections.
        for (Position p = 1; p < n; ++p) {
            if (rejected[(p - 1) / 2]) rejected[p] = 1;
            if (!rejected[p]) continue;
            const AgentId a = topology.agent_at(p);
            next_selection[a] = selection[a];
            next_aggregate[p] = aggregate[p];
            next_subtree_discomfort[p] = subtree_discomfort[p];
        }

        if (next_selection == selection) {
            out.inefficiency_trace.push_back(current_ineff);
            out.cost_trace.push_back(current_cost);
            break;
        }

        // Top-down: the root accepts the iteration only on strict improvement.
        const double candidate_ineff = config.inefficiency(next_aggregate[0]);
        const double candidate_cost = combined(candidate_ineff, next_subtree_discomfort[0]);
        if (candidate_cost < current_cost) {
            selection.swap(next_selection);
            aggregate.swap(next_aggregate);
            subtree_discomfort.swap(next_subtree_discomfort);
            current_ineff = candidate_ineff;
            current_cost = candidate_cost;
            out.inefficiency_trace.push_back(current_ineff);
            out.cost_trace.push_back(current_cost);
        } else {
            // Reverted; with deterministic choices the next iteration would repeat this one.
            out.inefficiency_trace.push_back(current_ineff);
            out.cost_trace.push_back(current_cost);
            break;
        }
    }

    out.selections = selection;
    out.global_response = aggregate[0];
    out.global_inefficiency = current_ineff;
    out.discomfort_per_agent.resize(n);
    for (AgentId a = 0; a < n; ++a) out.discomfort_per_agent[a] = plan_of(a, selection[a]).discomfort;
    out.subtree_aggregates = std::move(aggregate);
    return out;
}

RunOutcome run_baseline(const TreeTopology& topology, std::span<const PlanSet> plan_sets, const RunConfig& config) {
    return run(topology, plan_sets, BehaviorProfile::all_legitimate(topology.node_count()), config);
}

}  // namespace advopt
