#pragma once

#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

namespace scope {

// All sampling flows from one 64-bit seed through mt19937_64, whose output
// is pinned by the standard. Bounded draws use rejection sampling and
// shuffles are explicit Fisher-Yates, because std::uniform_int_distribution
// and std::shuffle are implementation-defined and would break
// bit-reproducibility across standard libraries.

inline std::uint64_t splitmix64(std::uint64_t& state) {
    state += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Per-stage generator: the stage tag keeps draws in one pipeline stage
/// from shifting the outcome of another.
inline std::mt19937_64 stage_generator(std::uint64_t seed, std::string_view stage) {
    std::uint64_t h = 0xcbf29ce484222325ULL;  // FNV-1a
    for (unsigned char c : stage) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    std::uint64_t state = seed ^ h;
    std::uint64_t derived = splitmix64(state);
    return std::mt19937_64(derived);
}

/// Uniform draw in [0, bound) without modulo bias.
inline std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t bound) {
    if (bound <= 1) return 0;
    const std::uint64_t limit = std::mt19937_64::max() - std::mt19937_64::max() % bound;
    std::uint64_t draw;
    do {
        draw = rng();
    } while (draw >= limit);
    return draw % bound;
}

template <typename T>
void deterministic_shuffle(std::vector<T>& values, std::mt19937_64& rng) {
    for (std::size_t i = values.size(); i > 1; --i) {
        const std::size_t j = static_cast<std::size_t>(uniform_below(rng, i));
        std::swap(values[i - 1], values[j]);
    }
}

}  // namespace scope
