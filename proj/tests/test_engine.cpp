#include <doctest.h>

#include <algorithm>
#include <limits>
#include <random>

#include "advopt/adversary.hpp"
#include "advopt/engine.hpp"
#include "advopt/error.hpp"
#include "oracles.hpp"

using namespace advopt;
using doctest::Approx;

namespace {

PlanSet make_set(std::vector<Plan> plans) { return PlanSet{0, std::move(plans)}; }

// Normalized weighted objective over an agent's candidates, evaluated from scratch.
std::size_t exhaustive_choice(const PlanSet& agent, double beta, const std::vector<double>& context,
                              const std::vector<double>& others) {
    const std::size_t k = agent.size();
    std::vector<double> I(k), D(k);
    double other_sum = 0;
    for (double x : others) other_sum += x;
    for (std::size_t i = 0; i < k; ++i) {
        std::vector<double> g = context;
        for (std::size_t j = 0; j < g.size(); ++j) g[j] += agent.plans[i].values[j];
        I[i] = oracle::population_variance(g);
        D[i] = (other_sum + agent.plans[i].discomfort) / static_cast<double>(others.size() + 1);
    }
    auto norm = [](std::vector<double>& v) {
        const double lo = *std::min_element(v.begin(), v.end()), hi = *std::max_element(v.begin(), v.end());
        for (auto& x : v) x = hi > lo ? (x - lo) / (hi - lo) : 0.0;
    };
    norm(I);
    norm(D);
    std::size_t best = 0;
    for (std::size_t i = 1; i < k; ++i)
        if ((1 - beta) * I[i] + beta * D[i] < (1 - beta) * I[best] + beta * D[best]) best = i;
    return best;
}

std::vector<double> flat_sum(std::span<const PlanSet> sets, const std::vector<std::size_t>& sel) {
    std::vector<double> g(sets.front().dim(), 0.0);
    for (std::size_t a = 0; a < sets.size(); ++a)
        for (std::size_t j = 0; j < g.size(); ++j) g[j] += sets[a].plans[sel[a]].values[j];
    return g;
}

BehaviorProfile random_profile(std::size_t n, std::mt19937_64& rng) {
    std::vector<double> betas(n, 0.0);
    std::uniform_real_distribution<double> U(0, 1);
    const double severity = U(rng);
    for (auto& b : betas)
        if (U(rng) < 0.3) b = severity;
    return BehaviorProfile(betas);
}

}  // namespace

TEST_CASE("select_plan degenerate weights") {
    auto agent = make_set({{{5, 5}, 0.7}, {{0, 0}, 0.1}, {{1, -1}, 0.1}, {{9, 0}, 0.4}});
    std::vector<double> context{1, 2};
    std::vector<double> others{0.3, 0.2};
    CHECK(select_plan(agent, {0.0, 1.0}, context, others, InefficiencyFn::variance()) == 1);
    // context + plan: (6,7) v=.25, (1,2) v=.25, (2,1) v=.25, (10,2) v=16 -> ties resolve to the lowest index
    CHECK(select_plan(agent, {1.0, 0.0}, context, others, InefficiencyFn::variance()) == 0);
    std::vector<double> c2{0, 3};
    // (5,8) v=2.25, (0,3) v=2.25, (1,2) v=.25, (9,3) v=9
    CHECK(select_plan(agent, {1.0, 0.0}, c2, others, InefficiencyFn::variance()) == 2);
}

TEST_CASE("select_plan matches exhaustive evaluation of the weighted objective") {
    auto toy = make_set({{{1, 0, 0}, 0.0}, {{0, 1, 0}, 1.0}, {{0, 0, 1}, 2.0}});
    std::vector<double> context{2, 0, 1};
    std::vector<double> others{0.5};
    CHECK(select_plan(toy, {0.5, 0.5}, context, others, InefficiencyFn::variance()) ==
          exhaustive_choice(toy, 0.5, context, others));

    std::mt19937_64 rng(5);
    std::normal_distribution<double> N(0, 1);
    std::uniform_real_distribution<double> U(0, 1);
    for (int trial = 0; trial < 2000; ++trial) {
        const std::size_t k = 2 + rng() % 6, d = 1 + rng() % 5;
        PlanSet s;
        for (std::size_t i = 0; i < k; ++i) {
            Plan p;
            for (std::size_t j = 0; j < d; ++j) p.values.push_back(N(rng));
            p.discomfort = U(rng);
            s.plans.push_back(p);
        }
        std::vector<double> context(d), others(rng() % 4);
        for (auto& x : context) x = N(rng);
        for (auto& x : others) x = U(rng);
        const double beta = U(rng);
        CHECK(select_plan(s, {1 - beta, beta}, context, others, InefficiencyFn::variance()) ==
              exhaustive_choice(s, beta, context, others));
    }
}

TEST_CASE("select_plan is invariant to rescaling discomfort") {
    std::mt19937_64 rng(8);
    std::normal_distribution<double> N(0, 1);
    std::uniform_real_distribution<double> U(0.1, 10);
    for (int trial = 0; trial < 500; ++trial) {
        PlanSet s;
        for (int i = 0; i < 4; ++i) s.plans.push_back({{N(rng), N(rng)}, U(rng)});
        auto scaled = s;
        const double c = U(rng);
        for (auto& p : scaled.plans) p.discomfort *= c;
        std::vector<double> context{N(rng), N(rng)};
        for (double beta : {0.0, 1.0, 0.37}) {
            std::vector<double> none;
            CHECK(select_plan(s, {1 - beta, beta}, context, none, InefficiencyFn::variance()) ==
                  select_plan(scaled, {1 - beta, beta}, context, none, InefficiencyFn::variance()));
        }
    }
}

TEST_CASE("single-plan agents are forced") {
    std::vector<PlanSet> sets;
    for (int a = 0; a < 9; ++a) sets.push_back(make_set({{{double(a), 1.0}, 0.5}}));
    auto t = build_balanced_binary(9, 2);
    auto out = run_baseline(t, sets, RunConfig{});
    CHECK(out.iterations_used == 1);
    CHECK(out.selections == std::vector<std::size_t>(9, 0));
    CHECK(out.global_response == std::vector<double>{36.0, 9.0});
    std::vector<double> betas(9, 0.0);
    betas[3] = betas[5] = 1.0;
    CHECK(run(t, sets, BehaviorProfile(betas), RunConfig{}).global_response == out.global_response);
}

TEST_CASE("fully selfish population selects minimum-discomfort plans") {
    auto sets = generate_gaussian_plans(40, 5, 3, 3);
    std::mt19937_64 rng(1);
    for (auto& s : sets) std::shuffle(s.plans.begin(), s.plans.end(), rng);
    auto t = build_balanced_binary(40, 3);
    auto out = run(t, sets, BehaviorProfile(std::vector<double>(40, 1.0)), RunConfig{});
    std::vector<std::size_t> expected;
    for (const auto& s : sets) {
        std::size_t best = 0;
        for (std::size_t i = 1; i < s.size(); ++i)
            if (s.plans[i].discomfort < s.plans[best].discomfort) best = i;
        expected.push_back(best);
    }
    CHECK(out.selections == expected);
    auto g = flat_sum(sets, expected);
    for (std::size_t j = 0; j < g.size(); ++j) CHECK(out.global_response[j] == Approx(g[j]).epsilon(1e-12));
}

TEST_CASE("baseline is the all-legitimate run") {
    auto sets = generate_gaussian_plans(15, 4, 2, 10);
    auto t = build_balanced_binary(15, 10);
    RunConfig cfg;
    CHECK(run_baseline(t, sets, cfg) == run(t, sets, BehaviorProfile::all_legitimate(15), cfg));
}

TEST_CASE("adversaries rarely improve on the baseline") {
    int not_worse = 0;
    for (int s = 0; s < 50; ++s) {
        auto sets = generate_gaussian_plans(12, 4, 2, 500 + s);
        auto t = build_balanced_binary(12, s);
        auto adv = random_adversaries(12, 6, s);
        auto base = run_baseline(t, sets, RunConfig{});
        auto attacked = run(t, sets, make_profile(t, adv, 1.0), RunConfig{});
        if (base.global_inefficiency <= attacked.global_inefficiency) ++not_worse;
    }
    CHECK(not_worse >= 45);
}

TEST_CASE("run invariants over random configurations") {
    std::mt19937_64 rng(77);
    for (int trial = 0; trial < 120; ++trial) {
        const std::size_t n = 1 + rng() % 40, k = 1 + rng() % 5, d = 1 + rng() % 6;
        auto sets = generate_gaussian_plans(n, k, d, rng());
        auto t = build_balanced_binary(n, rng());
        auto profile = random_profile(n, rng);
        RunConfig cfg;
        cfg.rng_seed = rng();
        cfg.initial_selection = trial % 2 ? InitialSelection::Random : InitialSelection::FirstPlan;
        cfg.branch_approval = trial % 3 != 0;
        if (trial % 4 == 0) {
            TargetSignal target;
            for (std::size_t j = 0; j < d; ++j) target.values.push_back(double(j));
            cfg.inefficiency = InefficiencyFn::rss(target, Scaling::MinMax);
        }
        auto out = run(t, sets, profile, cfg);

        CHECK(out.cost_trace.size() == out.inefficiency_trace.size());
        for (std::size_t i = 1; i < out.cost_trace.size(); ++i) CHECK(out.cost_trace[i] <= out.cost_trace[i - 1]);

        auto g = flat_sum(sets, out.selections);
        for (std::size_t j = 0; j < d; ++j) CHECK(out.global_response[j] == Approx(g[j]).epsilon(1e-9).scale(1.0));
        CHECK(out.global_inefficiency == Approx(cfg.inefficiency(g)).epsilon(1e-9).scale(1.0));

        for (Position p = 0; p < n; ++p) {
            std::vector<double> flat(d, 0.0);
            std::vector<Position> stack{p};
            while (!stack.empty()) {
                const Position q = stack.back();
                stack.pop_back();
                const auto& v = sets[t.agent_at(q)].plans[out.selections[t.agent_at(q)]].values;
                for (std::size_t j = 0; j < d; ++j) flat[j] += v[j];
                for (Position c : t.children_of(q)) stack.push_back(c);
            }
            for (std::size_t j = 0; j < d; ++j)
                CHECK(out.subtree_aggregates[p][j] == Approx(flat[j]).epsilon(1e-9).scale(1.0));
        }
        CHECK(out.mean_beta == Approx(profile.mean_beta()));
        CHECK(run(t, sets, profile, cfg) == out);
    }
}

TEST_CASE("run is never below the exhaustive optimum") {
    for (int s = 0; s < 10; ++s) {
        auto sets = generate_gaussian_plans(6, 3, 2, 1000 + s);
        auto out = run_baseline(build_balanced_binary(6, s), sets, RunConfig{});
        CHECK(out.global_inefficiency >= oracle::min_joint_variance(sets) - 1e-12);
    }
}

TEST_CASE("run rejects inconsistent inputs") {
    auto sets = generate_gaussian_plans(5, 2, 2, 1);
    auto t = build_balanced_binary(6, 1);
    CHECK_THROWS_AS(run_baseline(t, sets, RunConfig{}), Error);
    auto t5 = build_balanced_binary(5, 1);
    CHECK_THROWS_AS(run(t5, sets, BehaviorProfile::all_legitimate(4), RunConfig{}), Error);
    CHECK_THROWS_AS(BehaviorProfile(std::vector<double>{0.5, 1.5}), Error);
}
