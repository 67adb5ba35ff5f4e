// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>

#include "advopt/adversary.hpp"
#include "advopt/analytics.hpp"
#include "advopt/config.hpp"
#include "advopt/engine.hpp"
#include "advopt/error.hpp"
#include "advopt/log.hpp"
#include "advopt/sweep.hpp"
#include "oracles.hpp"
#include "test_util.hpp"

using namespace advopt;
namespace fs = std::filesystem;

namespace {

struct Verdict {
    bool pass = false;
    std::string detail;
};

struct Criterion {
    int id;
    std::string name;
    double budget_seconds;  // 0 = no runtime bound
    std::function<Verdict()> check;
};

std::string fmt(const char* f, auto... args) {
    char buf[256];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

Verdict layer_counts() {
    const std::size_t n[3] = {1000, 266, 72}, want[3] = {10, 9, 7};
    std::string got;
    bool ok = true;
    for (int i = 0; i < 3; ++i) {
        const auto layers = build_balanced_binary(n[i], 1).layer_count();
        ok = ok && layers == want[i];
        got += fmt("%zu->%zu ", n[i], layers);
    }
    return {ok, got};
}

Verdict severity() {
    auto g = severity_grid();
    bool ok = g.size() == 30 && g.back() == 1.0;
    for (std::size_t b = 1; ok && b <= 30; ++b) ok = g[b - 1] == static_cast<double>(b) / 30.0;
    return {ok, fmt("%zu values, last=%.17g", g.size(), g.back())};
}

Verdict accounting() {
    const fs::path root = ADVOPT_SOURCE_DIR;
    const auto energy = estimate_experiment_count(load_sweep_config(root / "configs/energy.json", root));
    const auto privacy = estimate_experiment_count(load_sweep_config(root / "configs/privacy.json", root));
    return {energy == 3118560 && privacy == 498780,
            fmt("energy=%llu privacy=%llu", (unsigned long long)energy, (unsigned long long)privacy)};
}

// Tree aggregation sums in a different order than a flat loop; allow for rounding only.
bool close(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size()) return false;
    for (std::size_t j = 0; j < a.size(); ++j)
        if (std::abs(a[j] - b[j]) > 1e-12 * std::max(1.0, std::abs(b[j]))) return false;
    return true;
}

Verdict degenerate() {
    std::mt19937_64 rng(4);
    int selfish_ok = 0, forced_ok = 0;
    const int trials = 20;
    for (int t = 0; t < trials; ++t) {
        const std::size_t n = 1 + rng() % 100;
        auto sets = generate_gaussian_plans(n, 1 + rng() % 6, 1 + rng() % 4, rng());
        for (auto& s : sets) std::shuffle(s.plans.begin(), s.plans.end(), rng);
        auto topo = build_balanced_binary(n, rng());
        auto out = run(topo, sets, BehaviorProfile(std::vector<double>(n, 1.0)), RunConfig{});
        std::vector<std::size_t> want;
        for (const auto& s : sets)
            want.push_back(static_cast<std::size_t>(
                std::min_element(s.plans.begin(), s.plans.end(),
                                 [](auto& a, auto& b) { return a.discomfort < b.discomfort; }) -
                s.plans.begin()));
        std::vector<double> g(sets[0].dim(), 0.0);
        for (std::size_t a = 0; a < n; ++a)
            for (std::size_t j = 0; j < g.size(); ++j) g[j] += sets[a].plans[want[a]].values[j];
        if (out.selections == want && close(out.global_response, g)) ++selfish_ok;

        auto single = generate_gaussian_plans(n, 1, 3, rng());
        auto forced = run(topo, single, BehaviorProfile(std::vector<double>(n, 0.3)), RunConfig{});
        std::vector<double> sum(3, 0.0);
        for (std::size_t a = 0; a < n; ++a)
            for (std::size_t j = 0; j < 3; ++j) sum[j] += single[a].plans[0].values[j];
        if (forced.selections == std::vector<std::size_t>(n, 0) && close(forced.global_response, sum) &&
            forced.iterations_used == 1)
            ++forced_ok;
    }
    return {selfish_ok == trials && forced_ok == trials,
            fmt("beta=1 exact %d/%d, k=1 forced %d/%d", selfish_ok, trials, forced_ok, trials)};
}

Verdict optimality_gap() {
    int within = 0, below = 0;
    double worst = 0;
    for (int s = 0; s < 50; ++s) {
        auto sets = generate_gaussian_plans(6, 3, 2, 1000 + s);
        const double opt = oracle::min_joint_variance(sets);
        const double got = run_baseline(build_balanced_binary(6, s), sets, RunConfig{}).global_inefficiency;
        if (got <= 1.1 * opt) ++within;
        if (got < opt - 1e-12) ++below;
        worst = std::max(worst, got / opt);
    }
    return {within >= 45 && below == 0,
            fmt("within 10%%: %d/50 (need >= 45), below optimum: %d, worst ratio %.3g", within, below, worst)};
}

Verdict monotone_trace() {
    std::mt19937_64 rng(6);
    std::uniform_real_distribution<double> U(0, 1);
    int monotone = 0;
    for (int t = 0; t < 200; ++t) {
        const std::size_t n = 1 + rng() % 50;
        auto sets = generate_gaussian_plans(n, 1 + rng() % 8, 1 + rng() % 8, rng());
        std::vector<double> betas(n, 0.0);
        const double severity = U(rng), share = U(rng);
        for (auto& b : betas)
            if (U(rng) < share) b = severity;
        RunConfig cfg;
        cfg.rng_seed = rng();
        if (t % 2) cfg.initial_selection = InitialSelection::Random;
        auto out = run(build_balanced_binary(n, rng()), sets, BehaviorProfile(betas), cfg);
        bool ok = true;
        for (std::size_t i = 1; i < out.cost_trace.size(); ++i) ok = ok && out.cost_trace[i] <= out.cost_trace[i - 1];
        monotone += ok;
    }
    return {monotone == 200, fmt("%d/200 non-increasing", monotone)};
}

Verdict front_and_knee() {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> U(-5, 5);
    int front_ok = 0, knee_ok = 0;
    for (int t = 0; t < 1000; ++t) {
        std::vector<Point2> pts(1 + rng() % 20);
        const bool grid = t % 2;
        for (auto& p : pts) p = grid ? Point2{double(rng() % 6), double(rng() % 6)} : Point2{U(rng), U(rng)};
        auto front = pareto_front(pts);
        front_ok += front == oracle::pareto(pts);
        knee_ok += knee_mmd(front) == oracle::knee(front);
    }
    return {front_ok == 1000 && knee_ok == 1000, fmt("front %d/1000, knee %d/1000", front_ok, knee_ok)};
}

Verdict otsu() {
    std::mt19937_64 rng(8);
    std::normal_distribution<double> N(0, 1);
    int agree = 0, sets = 0;
    while (sets < 100) {
        const std::size_t bins = 3 + rng() % 62, n = 10 + rng() % 90;
        std::vector<double> values(n);
        for (auto& x : values) x = sets % 2 ? N(rng) : 3.0 * double(rng() % 4) + 0.5 * N(rng);
        std::vector<double> got;
        try {
            got = multi_otsu(values, 3, bins);
        } catch (const Error&) {
            continue;  // fewer occupied bins than classes; not a valid instance
        }
        ++sets;
        auto want = oracle::otsu3(values, bins);
        const double tol = 1e-12 * std::max(1.0, std::abs(want[1]));
        agree += std::abs(got[0] - want[0]) <= tol && std::abs(got[1] - want[1]) <= tol;
    }
    std::vector<double> clusters;
    for (double c : {0.0, 5.0, 10.0}) clusters.insert(clusters.end(), 30, c);
    auto t = multi_otsu(clusters);
    const bool rvc = classify_rvc(0, t[0], t[1]) == RvcLabel::Resilience &&
                     classify_rvc(5, t[0], t[1]) == RvcLabel::Vulnerability &&
                     classify_rvc(10, t[0], t[1]) == RvcLabel::Collapse;
    return {agree == 100 && rvc, fmt("oracle %d/100, {0,5,10} thresholds (%.4g, %.4g) -> %s", agree, t[0], t[1],
                                     rvc ? "R/V/C" : "mislabeled")};
}

Verdict gaussian_trend() {
    testutil::TempDir dir("acceptance-trend");
    auto cfg = parse_sweep_config(R"({
        "dataset": {"name": "gauss", "kind": "gaussian", "agents": 20, "plans": 4, "dim": 2},
        "master_seed": 1, "severities": [0.9], "runs_per_cell": 30, "modes": ["scale"]
    })",
                                  dir.path());
    cfg.output_dir = dir.path() / "out";
    auto result = run_sweep(cfg);
    std::vector<double> fraction, ineff, discomfort;
    for (const auto& c : result.grid.cells) {
        fraction.push_back(c.metrics.adversary_fraction);
        ineff.push_back(c.metrics.inefficiency);
        discomfort.push_back(c.metrics.discomfort_total);
    }
    const double rho = spearman(fraction, ineff);
    double worst_rise = 0;
    std::size_t at = 0;
    for (std::size_t i = 1; i < discomfort.size(); ++i)
        if (discomfort[i] - discomfort[i - 1] > worst_rise) {
            worst_rise = discomfort[i] - discomfort[i - 1];
            at = i;
        }
    const bool monotone = worst_rise <= 0;
    std::string detail = fmt("spearman=%.3f (need > 0.5), discomfort %.4f -> %.4f, ", rho, discomfort.front(),
                             discomfort.back());
    detail += monotone ? "non-increasing"
                       : fmt("largest rise %.4g at fraction %.2f -> %.2f", worst_rise, fraction[at - 1], fraction[at]);
    return {rho > 0.5 && monotone && result.failed_units == 0, detail};
}

Verdict determinism() {
    testutil::TempDir a("acceptance-det"), b("acceptance-det");
    auto make = [](const fs::path& dir, std::size_t threads) {
        auto cfg = parse_sweep_config(R"({
            "dataset": {"name": "det", "kind": "gaussian", "agents": [12, 15], "plans": [3], "dim": 3},
            "master_seed": 42, "severities": [0.2, 0.6, 1.0], "runs_per_cell": 4
        })",
                                      dir);
        cfg.threads = threads;
        return cfg;
    };
    auto ca = make(a.path(), 1), cb = make(b.path(), 8);
    bool same = true;
    std::size_t rows = 0;
    auto compare = [&](const SweepResult& x, const SweepResult& y) {
        same = same && x.failed_units == 0 && testutil::slurp(x.csv_path) == testutil::slurp(y.csv_path);
        rows += x.rows.size();
    };
    compare(run_sweep(ca), run_sweep(cb));
    compare(run_structural(ca, SweepMode::LayerWise), run_structural(cb, SweepMode::LayerWise));
    compare(run_structural(ca, SweepMode::Cumulative), run_structural(cb, SweepMode::Cumulative));
    return {same, fmt("%zu rows, serial vs 8 threads %s", rows, same ? "byte-identical" : "differ")};
}

}  // namespace

int main() {
    set_warning_sink([](const std::string&) {});
    const std::vector<Criterion> criteria{
        {1, "layer counts for n=1000/266/72", 1.0, layer_counts},
        {2, "severity grid", 0, severity},
        {3, "experiment accounting (energy, privacy)", 0, accounting},
        {4, "degenerate-behavior oracles", 1.0, degenerate},
        {5, "optimality gap vs exhaustive enumeration", 30.0, optimality_gap},
        {6, "monotone accepted cost trace", 0, monotone_trace},
        {7, "Pareto front and knee oracles", 0, front_and_knee},
        {8, "multi-Otsu oracle and R/V/C labels", 0, otsu},
        {9, "gaussian trend at beta=0.9", 300.0, gaussian_trend},
        {10, "deterministic sorted CSVs", 0, determinism},
    };
    int failed = 0;
    for (const auto& c : criteria) {
        const auto start = std::chrono::steady_clock::now();
        Verdict v;
        try {
            v = c.check();
        } catch (const std::exception& e) {
            v = {false, std::string("error: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (c.budget_seconds > 0 && secs >= c.budget_seconds) {
            v.pass = false;
            v.detail += fmt("; over the %.0f s budget", c.budget_seconds);
        }
        failed += !v.pass;
        std::printf("[%s] %2d %s: %s (%.3f s)\n", v.pass ? "PASS" : "FAIL", c.id, c.name.c_str(), v.detail.c_str(),
                    secs);
    }
    std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
