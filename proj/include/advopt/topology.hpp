#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace advopt {

/// Index of an agent into the population's plan-set list, in [0, n).
using AgentId = std::size_t;
/// Breadth-first slot in the tree, in [0, n). Position 0 is the root.
using Position = std::size_t;

/// Balanced binary tree over n agents, filled breadth-first left to right.
/// Layers are 1-based (root = layer 1). Agents are placed onto positions
/// through a seeded permutation. Immutable once built.
class TreeTopology {
public:
    std::size_t node_count() const noexcept { return agent_at_.size(); }
    std::size_t layer_count() const noexcept { return layer_bounds_.size() - 1; }

    std::optional<Position> parent_of(Position pos) const;
    std::span<const Position> children_of(Position pos) const { return children_.at(pos); }
    std::size_t layer_of(Position pos) const;

    AgentId agent_at(Position pos) const { return agent_at_.at(pos); }
    Position position_of(AgentId agent) const { return position_of_.at(agent); }

    /// Positions [first, last) that make up a layer.
    std::pair<Position, Position> layer_range(std::size_t layer) const;
    std::size_t layer_size(std::size_t layer) const;

    bool operator==(const TreeTopology&) const = default;

private:
    friend TreeTopology build_balanced_binary(std::size_t n, std::uint64_t permutation_seed);

    std::vector<std::vector<Position>> children_;
    std::vector<AgentId> agent_at_;
    std::vector<Position> position_of_;
    std::vector<Position> layer_bounds_;  // layer L spans [bounds[L-1], bounds[L])
};

/// Throws Error(InvalidSize) for n == 0.
TreeTopology build_balanced_binary(std::size_t n, std::uint64_t permutation_seed);

/// Agents at the given 1-based depth, ordered by position. Throws Error(Range).
std::vector<AgentId> agents_in_layer(const TreeTopology& t, std::size_t layer);

/// ceil(log2(n + 1)), the depth of a breadth-first-filled binary tree.
std::size_t binary_layer_count(std::size_t n);

/// Sizes of each layer of a breadth-first-filled binary tree of n nodes.
std::vector<std::size_t> binary_layer_sizes(std::size_t n);

}  // namespace advopt
