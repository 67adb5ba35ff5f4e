#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "advopt/error.hpp"
#include "advopt/plans.hpp"
#include "test_util.hpp"

using namespace advopt;

namespace {

ErrorKind kind_of(auto&& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.kind();
    }
    FAIL("expected an advopt::Error");
    return ErrorKind::InvalidInput;
}

}  // namespace

TEST_CASE("plan line parsing") {
    auto p = parse_plan_line("0.25:1.0,2.0");
    CHECK(p.discomfort == 0.25);
    CHECK(p.values == std::vector<double>{1.0, 2.0});
    CHECK(kind_of([] { parse_plan_line("0.25:1.0,x"); }) == ErrorKind::Parse);
    CHECK(kind_of([] { parse_plan_line("1.0,2.0"); }) == ErrorKind::Parse);
    CHECK(kind_of([] { parse_plan_line("0.1:"); }) == ErrorKind::Parse);
}

TEST_CASE("plan lines round-trip bit-exactly") {
    Plan p{{0.1, -1e-300, 123456.789, 1.0 / 3.0}, 2.0 / 7.0};
    CHECK(parse_plan_line(format_plan_line(p)) == p);
}

TEST_CASE("energy-style plan file loads as k=10, d=144") {
    testutil::TempDir dir("plans");
    std::string text;
    for (int i = 0; i < 10; ++i) {
        text += std::to_string(i * 0.1) + ":";
        for (int j = 0; j < 144; ++j) text += (j ? "," : "") + std::to_string(i + j);
        text += "\n";
    }
    testutil::spit(dir.path() / "agent_0.plans", text);
    auto set = read_plan_file(dir.path() / "agent_0.plans", 0);
    CHECK(set.size() == 10);
    CHECK(set.dim() == 144);
}

TEST_CASE("malformed file reports the offending line") {
    testutil::TempDir dir("plans");
    testutil::spit(dir.path() / "agent_3.plans", "0:1,2\n1:1,x\n");
    try {
        read_plan_file(dir.path() / "agent_3.plans", 3);
        FAIL("no error");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::Parse);
        CHECK(std::string(e.what()).find(":2") != std::string::npos);
    }
}

TEST_CASE("directory ingestion and serialization round-trip") {
    testutil::TempDir dir("plans");
    auto sets = generate_gaussian_plans(12, 3, 4, 99);
    write_plan_sets(dir.path(), sets);
    CHECK(count_plan_files(dir.path()) == 12);
    auto loaded = load_plan_sets(dir.path());
    CHECK(loaded == sets);

    testutil::TempDir again("plans");
    write_plan_sets(again.path(), loaded);
    for (int i = 0; i < 12; ++i) {
        const auto name = "agent_" + std::to_string(i) + ".plans";
        CHECK(testutil::slurp(dir.path() / name) == testutil::slurp(again.path() / name));
    }
}

TEST_CASE("directory ingestion errors") {
    testutil::TempDir empty("plans");
    CHECK(kind_of([&] { load_plan_sets(empty.path()); }) == ErrorKind::NoData);

    testutil::TempDir mixed("plans");
    testutil::spit(mixed.path() / "agent_0.plans", "0:1,2\n");
    testutil::spit(mixed.path() / "agent_1.plans", "0:1,2,3\n");
    CHECK(kind_of([&] { load_plan_sets(mixed.path()); }) == ErrorKind::DimensionMismatch);
}

TEST_CASE("target files round-trip") {
    testutil::TempDir dir("plans");
    TargetSignal t{{0.0, 0.25, 1.0 / 3.0}};
    write_target_file(dir.path() / "t.target", t);
    CHECK(read_target_file(dir.path() / "t.target") == t);
}

TEST_CASE("gaussian plans") {
    auto sets = generate_gaussian_plans(10, 2, 2, 7);
    REQUIRE(sets.size() == 10);
    for (const auto& s : sets) {
        REQUIRE(s.size() == 2);
        CHECK(s.plans[0].discomfort == 0.0);
        CHECK(s.plans[1].discomfort == 1.0);
        CHECK(s.dim() == 2);
    }
    CHECK(generate_gaussian_plans(10, 2, 2, 7) == sets);
    CHECK_FALSE(generate_gaussian_plans(10, 2, 2, 8) == sets);
}

TEST_CASE("gaussian sample mean is near zero") {
    auto sets = generate_gaussian_plans(100, 10, 100, 2024);
    double sum = 0;
    std::size_t count = 0;
    for (const auto& s : sets)
        for (const auto& p : s.plans)
            for (double v : p.values) {
                sum += v;
                ++count;
            }
    CHECK(count == 100000);
    CHECK(std::abs(sum / static_cast<double>(count)) <= 0.02);
}

TEST_CASE("voting targets are all permutations of the levels") {
    std::vector<double> five{0, 0.25, 0.5, 0.75, 1};
    auto t5 = generate_voting_targets(five, 5);
    CHECK(t5.size() == 120);
    std::set<std::vector<double>> unique;
    for (auto& t : t5) unique.insert(t.values);
    CHECK(unique.size() == 120);

    std::vector<double> two{0, 1};
    auto t2 = generate_voting_targets(two, 2);
    REQUIRE(t2.size() == 2);
    CHECK(t2[0].values == std::vector<double>{0, 1});
    CHECK(t2[1].values == std::vector<double>{1, 0});

    std::vector<double> three{0, 0.5, 1};
    CHECK(generate_voting_targets(three, 3).size() == 6);

    std::vector<double> dup{0, 0, 1};
    CHECK(kind_of([&] { generate_voting_targets(dup, 3); }) == ErrorKind::InvalidInput);
    CHECK(kind_of([&] { generate_voting_targets(three, 4); }) == ErrorKind::DimensionMismatch);
}
