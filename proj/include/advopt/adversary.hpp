#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "advopt/engine.hpp"
#include "advopt/topology.hpp"

namespace advopt {

inline constexpr std::size_t kSeverityLevels = 30;
inline constexpr std::size_t kDefaultCombinationCap = 100;
inline constexpr unsigned kLayerPercents[] = {25, 50, 75, 100};

/// b / 30 for b = 1..30.
std::vector<double> severity_grid();

/// max(1, ceil(p * layer_size / 100)) for p in {25, 50, 75, 100}.
std::size_t layer_adversary_count(std::size_t layer_size, unsigned percent);

/// C(n, k), saturating at UINT64_MAX.
std::uint64_t binomial(std::uint64_t n, std::uint64_t k);

/// All k_p-subsets of the layer when there are at most `cap` of them, otherwise
/// `cap` distinct subsets drawn uniformly. Each subset is sorted; the list is sorted.
std::vector<std::vector<AgentId>> enumerate_layer_configs(const TreeTopology& t, std::size_t layer, unsigned percent,
                                                          std::size_t cap = kDefaultCombinationCap,
                                                          std::uint64_t seed = 0);

/// enumerate_layer_configs with an explicit subset size.
std::vector<std::vector<AgentId>> enumerate_layer_subsets(const TreeTopology& t, std::size_t layer, std::size_t k,
                                                          std::size_t cap = kDefaultCombinationCap,
                                                          std::uint64_t seed = 0);

/// Distinct adversary counts k_p of a layer over p in {25, 50, 75, 100}, ascending.
std::vector<std::size_t> distinct_layer_counts(std::size_t layer_size);

enum class Direction { TopDown, BottomUp };

std::string to_string(Direction d);
Direction parse_direction(const std::string& s);

/// First m agents in breadth-first order (top-down) or reverse breadth-first order (bottom-up).
std::vector<AgentId> cumulative_positions(const TreeTopology& t, Direction direction, std::size_t m);

/// `count` agents drawn uniformly without replacement, sorted.
std::vector<AgentId> random_adversaries(std::size_t n, std::size_t count, std::uint64_t seed);

/// beta = severity for listed agents, 0 elsewhere.
BehaviorProfile make_profile(const TreeTopology& t, std::span<const AgentId> adversaries, double severity);

enum class PlacementMode { Random, Layer, CumulativeTopDown, CumulativeBottomUp };

std::string to_string(PlacementMode m);
PlacementMode parse_placement(const std::string& s);

struct AttackSpec {
    double severity = 1.0;
    PlacementMode placement = PlacementMode::Random;
    std::size_t count = 0;          // random: adversary count; cumulative: m
    std::size_t layer = 1;          // layer mode
    unsigned percent = 100;         // layer mode
    std::size_t config_index = 0;   // layer mode: which sampled combination
    std::size_t cap = kDefaultCombinationCap;
    std::uint64_t sample_seed = 0;
};

/// Adversary set described by an attack spec on a concrete tree.
std::vector<AgentId> resolve_attack(const TreeTopology& t, const AttackSpec& spec);

}  // namespace advopt
