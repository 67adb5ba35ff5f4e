#include "advopt/topology.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "advopt/error.hpp"
#include "advopt/rng.hpp"

namespace advopt {

std::size_t binary_layer_count(std::size_t n) {
    std::size_t layers = 0;
    std::size_t capacity = 0;
    while (capacity < n) {
        capacity = capacity * 2 + 1;
        ++layers;
    }
    return layers;
}

std::vector<std::size_t> binary_layer_sizes(std::size_t n) {
    std::vector<std::size_t> sizes;
    std::size_t width = 1;
    for (std::size_t remaining = n; remaining > 0; width *= 2) {
        const std::size_t take = std::min(width, remaining);
        sizes.push_back(take);
        remaining -= take;
    }
    return sizes;
}

TreeTopology build_balanced_binary(std::size_t n, std::uint64_t permutation_seed) {
    if (n == 0) throw Error(ErrorKind::InvalidSize, "tree needs at least one agent");

    TreeTopology t;
    t.children_.resize(n);
    for (Position p = 0; p < n; ++p) {
        for (Position c : {2 * p + 1, 2 * p + 2})
            if (c < n) t.children_[p].push_back(c);
    }

    t.layer_bounds_.push_back(0);
    for (std::size_t size : binary_layer_sizes(n)) t.layer_bounds_.push_back(t.layer_bounds_.back() + size);

    t.agent_at_.resize(n);
    std::iota(t.agent_at_.begin(), t.agent_at_.end(), AgentId{0});
    Rng rng(permutation_seed);
    std::shuffle(t.agent_at_.begin(), t.agent_at_.end(), rng);

    t.position_of_.resize(n);
    for (Position p = 0; p < n; ++p) t.position_of_[t.agent_at_[p]] = p;
    return t;
}

std::optional<Position> TreeTopology::parent_of(Position pos) const {
    if (pos >= node_count()) throw Error(ErrorKind::Range, "position " + std::to_string(pos) + " out of range");
    if (pos == 0) return std::nullopt;
    return (pos - 1) / 2;
}

std::size_t TreeTopology::layer_of(Position pos) const {
    if (pos >= node_count()) throw Error(ErrorKind::Range, "position " + std::to_string(pos) + " out of range");
    auto it = std::upper_bound(layer_bounds_.begin(), layer_bounds_.end(), pos);
    return static_cast<std::size_t>(it - layer_bounds_.begin());
}

std::pair<Position, Position> TreeTopology::layer_range(std::size_t layer) const {
    if (layer < 1 || layer > layer_count())
        throw Error(ErrorKind::Range, "layer " + std::to_string(layer) + " not in [1, " + std::to_string(layer_count()) + "]");
    return {layer_bounds_[layer - 1], layer_bounds_[layer]};
}

std::size_t TreeTopology::layer_size(std::size_t layer) const {
    auto [first, last] = layer_range(layer);
    return last - first;
}

std::vector<AgentId> agents_in_layer(const TreeTopology& t, std::size_t layer) {
    auto [first, last] = t.layer_range(layer);
    std::vector<AgentId> out;
    out.reserve(last - first);
    for (Position p = first; p < last; ++p) out.push_back(t.agent_at(p));
    return out;
}

}  // namespace advopt
