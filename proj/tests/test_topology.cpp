#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <set>

#include "advopt/error.hpp"
#include "advopt/topology.hpp"

using namespace advopt;

TEST_CASE("layer counts of reported population sizes") {
    CHECK(build_balanced_binary(1000, 1).layer_count() == 10);
    CHECK(build_balanced_binary(266, 1).layer_count() == 9);
    CHECK(build_balanced_binary(72, 1).layer_count() == 7);
    auto one = build_balanced_binary(1, 3);
    CHECK(one.layer_count() == 1);
    CHECK(one.node_count() == 1);
    CHECK_FALSE(one.parent_of(0).has_value());
    CHECK(one.children_of(0).empty());
}

TEST_CASE("empty population is rejected") {
    CHECK_THROWS_AS(build_balanced_binary(0, 1), Error);
    try {
        build_balanced_binary(0, 1);
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::InvalidSize);
    }
}

TEST_CASE("agents_in_layer on small and large trees") {
    auto t7 = build_balanced_binary(7, 5);
    auto root = agents_in_layer(t7, 1);
    REQUIRE(root.size() == 1);
    CHECK(root[0] == t7.agent_at(0));
    CHECK(agents_in_layer(t7, 3).size() == 4);
    CHECK(agents_in_layer(build_balanced_binary(1000, 9), 10).size() == 489);
    CHECK_THROWS_AS(agents_in_layer(t7, 0), Error);
    CHECK_THROWS_AS(agents_in_layer(t7, 4), Error);
}

TEST_CASE("layer sizes cover the population and only the last layer is partial") {
    for (std::size_t n = 1; n <= 300; ++n) {
        auto t = build_balanced_binary(n, n);
        std::size_t total = 0;
        for (std::size_t L = 1; L <= t.layer_count(); ++L) {
            const auto size = agents_in_layer(t, L).size();
            total += size;
            if (L < t.layer_count()) CHECK(size == (std::size_t{1} << (L - 1)));
            else CHECK(size <= (std::size_t{1} << (L - 1)));
            CHECK(size == t.layer_size(L));
        }
        CHECK(total == n);
        CHECK(binary_layer_count(n) == t.layer_count());
        auto sizes = binary_layer_sizes(n);
        CHECK(std::accumulate(sizes.begin(), sizes.end(), std::size_t{0}) == n);
    }
}

TEST_CASE("parent and child links are consistent with breadth-first numbering") {
    auto t = build_balanced_binary(37, 11);
    for (Position p = 0; p < t.node_count(); ++p) {
        for (Position c : t.children_of(p)) {
            CHECK(t.parent_of(c) == p);
            CHECK(t.layer_of(c) == t.layer_of(p) + 1);
        }
        if (p > 0) CHECK(*t.parent_of(p) == (p - 1) / 2);
        CHECK(t.position_of(t.agent_at(p)) == p);
    }
}

TEST_CASE("placement is a permutation and deterministic in the seed") {
    auto a = build_balanced_binary(50, 42);
    auto b = build_balanced_binary(50, 42);
    auto c = build_balanced_binary(50, 43);
    CHECK(a == b);
    CHECK_FALSE(a == c);
    std::set<AgentId> seen;
    for (Position p = 0; p < a.node_count(); ++p) seen.insert(a.agent_at(p));
    CHECK(seen.size() == 50);
    CHECK(*seen.rbegin() == 49);
}
