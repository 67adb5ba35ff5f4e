#include <doctest.h>

#include <algorithm>
#include <random>

#include "advopt/costs.hpp"
#include "advopt/error.hpp"

using namespace advopt;
using doctest::Approx;

TEST_CASE("variance examples") {
    std::vector<double> c{3, 3, 3, 3};
    CHECK(variance_cost(c) == 0.0);
    std::vector<double> a{0, 2};
    CHECK(variance_cost(a) == 1.0);
    std::vector<double> b{1, 2, 3, 4};
    CHECK(variance_cost(b) == 1.25);
}

TEST_CASE("rss examples") {
    std::vector<double> g{0, 1}, t{1, 0};
    CHECK(rss_cost(g, t, Scaling::Identity) == 2.0);
    CHECK(rss_cost(g, g, Scaling::Identity) == 0.0);
    CHECK(rss_cost(g, g, Scaling::MinMax) == 0.0);
    CHECK(rss_cost(g, g, Scaling::ZeroMeanUnitNorm) == 0.0);
    std::vector<double> g2{0, 2}, t2{0, 1};
    CHECK(rss_cost(g2, t2, Scaling::MinMax) == 0.0);
    std::vector<double> shorter{1};
    CHECK_THROWS_AS(rss_cost(g, shorter, Scaling::Identity), Error);
}

TEST_CASE("discomfort aggregation examples") {
    std::vector<double> z{0, 0, 0}, one{1}, m{0.2, 0.4, 0.6};
    CHECK(aggregate_discomfort(z) == 0.0);
    CHECK(aggregate_discomfort(one) == 1.0);
    CHECK(aggregate_discomfort(m) == Approx(0.4).epsilon(1e-15));
}

TEST_CASE("names round-trip") {
    for (auto s : {Scaling::Identity, Scaling::MinMax, Scaling::ZeroMeanUnitNorm}) CHECK(parse_scaling(to_string(s)) == s);
    for (auto k : {InefficiencyKind::Variance, InefficiencyKind::Rss})
        CHECK(parse_inefficiency_kind(to_string(k)) == k);
    CHECK_THROWS_AS(parse_scaling("log"), Error);
}

TEST_CASE("cost properties on random vectors") {
    std::mt19937_64 rng(17);
    std::normal_distribution<double> N(0, 3);
    std::uniform_real_distribution<double> U(-5, 5);
    for (int trial = 0; trial < 500; ++trial) {
        const std::size_t d = 1 + rng() % 20;
        std::vector<double> g(d), t(d);
        for (auto& x : g) x = N(rng);
        for (auto& x : t) x = N(rng);
        const double c = U(rng);
        const double v = variance_cost(g);

        auto shifted = g, scaled = g;
        for (auto& x : shifted) x += c;
        for (auto& x : scaled) x *= c;
        CHECK(variance_cost(shifted) == Approx(v).epsilon(1e-9).scale(1.0));
        CHECK(variance_cost(scaled) == Approx(c * c * v).epsilon(1e-9).scale(1.0));

        const double r = rss_cost(g, t, Scaling::Identity);
        CHECK(r >= 0.0);
        CHECK(r == rss_cost(t, g, Scaling::Identity));

        const double mean = aggregate_discomfort(g);
        CHECK(mean >= *std::min_element(g.begin(), g.end()) - 1e-12);
        CHECK(mean <= *std::max_element(g.begin(), g.end()) + 1e-12);
        auto perm = g;
        std::shuffle(perm.begin(), perm.end(), rng);
        CHECK(aggregate_discomfort(perm) == Approx(mean).epsilon(1e-12).scale(1.0));
    }
}

TEST_CASE("inefficiency function matches the free functions") {
    std::vector<double> g{0.5, -1, 2};
    TargetSignal t{{1, 0, 1}};
    CHECK(InefficiencyFn::variance()(g) == variance_cost(g));
    for (auto s : {Scaling::Identity, Scaling::MinMax, Scaling::ZeroMeanUnitNorm})
        CHECK(InefficiencyFn::rss(t, s)(g) == Approx(rss_cost(g, t.values, s)).epsilon(1e-14));
}
