#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>
#include <string_view>

namespace advopt {

using Rng = std::mt19937_64;

/// SplitMix64 finalizer. Used to derive independent child seeds from a master
/// seed and a tuple of coordinates so that every run is reproducible on its own.
constexpr std::uint64_t mix_seed(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t master, std::initializer_list<std::uint64_t> parts) noexcept {
    std::uint64_t h = mix_seed(master);
    for (auto p : parts) h = mix_seed(h ^ mix_seed(p + 0x632be59bd9b4e019ULL));
    return h;
}

}  // namespace advopt

namespace advopt {

/// FNV-1a, used to fold names into seed derivations portably.
constexpr std::uint64_t fnv1a(std::string_view s) noexcept {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (char c : s) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001b3ULL;
    }
    return h;
}

}  // namespace advopt
