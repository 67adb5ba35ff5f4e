#include "advopt/adversary.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <random>
#include <set>

#include "advopt/error.hpp"
#include "advopt/rng.hpp"

namespace advopt {

std::vector<double> severity_grid() {
    std::vector<double> grid;
    grid.reserve(kSeverityLevels);
    for (std::size_t b = 1; b <= kSeverityLevels; ++b)
        grid.push_back(static_cast<double>(b) / static_cast<double>(kSeverityLevels));
    return grid;
}

std::size_t layer_adversary_count(std::size_t layer_size, unsigned percent) {
    if (layer_size == 0) throw Error(ErrorKind::InvalidInput, "empty layer");
    if (percent != 25 && percent != 50 && percent != 75 && percent != 100)
        throw Error(ErrorKind::InvalidInput, "layer percentage must be one of 25, 50, 75, 100");
    return std::max<std::size_t>(1, (percent * layer_size + 99) / 100);
}

std::uint64_t binomial(std::uint64_t n, std::uint64_t k) {
    if (k > n) return 0;
    k = std::min(k, n - k);
    unsigned __int128 c = 1;
    for (std::uint64_t i = 0; i < k; ++i) {
        c = c * (n - i) / (i + 1);
        if (c > std::numeric_limits<std::uint64_t>::max()) return std::numeric_limits<std::uint64_t>::max();
    }
    return static_cast<std::uint64_t>(c);
}

namespace {

std::vector<AgentId> sample_subset(std::span<const AgentId> pool, std::size_t k, Rng& rng) {
    std::vector<AgentId> v(pool.begin(), pool.end());
    for (std::size_t i = 0; i < k; ++i) {
        std::uniform_int_distribution<std::size_t> pick(i, v.size() - 1);
        std::swap(v[i], v[pick(rng)]);
    }
    v.resize(k);
    std::sort(v.begin(), v.end());
    return v;
}

}  // namespace

std::vector<std::vector<AgentId>> enumerate_layer_configs(const TreeTopology& t, std::size_t layer, unsigned percent,
                                                          std::size_t cap, std::uint64_t seed) {
    return enumerate_layer_subsets(t, layer, layer_adversary_count(t.layer_size(layer), percent), cap, seed);
}

std::vector<std::size_t> distinct_layer_counts(std::size_t layer_size) {
    std::vector<std::size_t> ks;
    for (unsigned p : kLayerPercents) {
        const std::size_t k = layer_adversary_count(layer_size, p);
        if (std::find(ks.begin(), ks.end(), k) == ks.end()) ks.push_back(k);
    }
    std::sort(ks.begin(), ks.end());
    return ks;
}

std::vector<std::vector<AgentId>> enumerate_layer_subsets(const TreeTopology& t, std::size_t layer, std::size_t k,
                                                          std::size_t cap, std::uint64_t seed) {
    if (cap == 0) throw Error(ErrorKind::InvalidInput, "combination cap must be >= 1");
    const std::vector<AgentId> agents = agents_in_layer(t, layer);
    if (k < 1 || k > agents.size()) throw Error(ErrorKind::Range, "subset size out of range for layer");
    const std::uint64_t total = binomial(agents.size(), k);

    std::vector<std::vector<AgentId>> out;
    if (total <= cap) {
        std::vector<bool> chosen(agents.size(), false);
        std::fill(chosen.begin(), chosen.begin() + static_cast<std::ptrdiff_t>(k), true);
        do {
            std::vector<AgentId> subset;
            for (std::size_t i = 0; i < agents.size(); ++i)
                if (chosen[i]) subset.push_back(agents[i]);
            std::sort(subset.begin(), subset.end());
            out.push_back(std::move(subset));
        } while (std::prev_permutation(chosen.begin(), chosen.end()));
    } else {
        Rng rng(seed);
        std::set<std::vector<AgentId>> seen;
        while (seen.size() < cap) seen.insert(sample_subset(agents, k, rng));
        out.assign(seen.begin(), seen.end());
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::string to_string(Direction d) { return d == Direction::TopDown ? "top-down" : "bottom-up"; }

Direction parse_direction(const std::string& s) {
    if (s == "top-down") return Direction::TopDown;
    if (s == "bottom-up") return Direction::BottomUp;
    throw Error(ErrorKind::Configuration, "unknown direction '" + s + "'");
}

std::vector<AgentId> cumulative_positions(const TreeTopology& t, Direction direction, std::size_t m) {
    const std::size_t n = t.node_count();
    if (m < 1 || m > n) throw Error(ErrorKind::Range, "cumulative count " + std::to_string(m) + " not in [1, n]");
    std::vector<AgentId> out;
    out.reserve(m);
    for (std::size_t i = 0; i < m; ++i) out.push_back(t.agent_at(direction == Direction::TopDown ? i : n - 1 - i));
    return out;
}

std::vector<AgentId> random_adversaries(std::size_t n, std::size_t count, std::uint64_t seed) {
    if (count > n) throw Error(ErrorKind::Range, "more adversaries than agents");
    std::vector<AgentId> pool(n);
    std::iota(pool.begin(), pool.end(), AgentId{0});
    Rng rng(seed);
    return sample_subset(pool, count, rng);
}

BehaviorProfile make_profile(const TreeTopology& t, std::span<const AgentId> adversaries, double severity) {
    if (!(severity > 0.0 && severity <= 1.0)) throw Error(ErrorKind::InvalidInput, "severity must lie in (0, 1]");
    std::vector<double> betas(t.node_count(), 0.0);
    for (AgentId a : adversaries) {
        if (a >= betas.size()) throw Error(ErrorKind::InvalidInput, "unknown agent id " + std::to_string(a));
        betas[a] = severity;
    }
    return BehaviorProfile(std::move(betas));
}

std::string to_string(PlacementMode m) {
    switch (m) {
        case PlacementMode::Random: return "random";
        case PlacementMode::Layer: return "layer";
        case PlacementMode::CumulativeTopDown: return "cumulative-top-down";
        case PlacementMode::CumulativeBottomUp: return "cumulative-bottom-up";
    }
    return "random";
}

PlacementMode parse_placement(const std::string& s) {
    if (s == "random") return PlacementMode::Random;
    if (s == "layer") return PlacementMode::Layer;
    if (s == "cumulative-top-down") return PlacementMode::CumulativeTopDown;
    if (s == "cumulative-bottom-up") return PlacementMode::CumulativeBottomUp;
    throw Error(ErrorKind::Configuration, "unknown placement '" + s + "'");
}

std::vector<AgentId> resolve_attack(const TreeTopology& t, const AttackSpec& spec) {
    switch (spec.placement) {
        case PlacementMode::Random: return random_adversaries(t.node_count(), spec.count, spec.sample_seed);
        case PlacementMode::Layer: {
            auto configs = enumerate_layer_configs(t, spec.layer, spec.percent, spec.cap, spec.sample_seed);
            if (spec.config_index >= configs.size())
                throw Error(ErrorKind::Range, "layer configuration index " + std::to_string(spec.config_index) +
                                                  " >= " + std::to_string(configs.size()));
            return configs[spec.config_index];
        }
        case PlacementMode::CumulativeTopDown: return cumulative_positions(t, Direction::TopDown, spec.count);
        case PlacementMode::CumulativeBottomUp: return cumulative_positions(t, Direction::BottomUp, spec.count);
    }
    return {};
}

}  // namespace advopt
