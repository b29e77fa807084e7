#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace tsgen {

using Rng = std::mt19937_64;

/// Unbiased uniform draw in [0, n), n >= 1. Rejection sampling on the raw
/// 64-bit stream keeps the number of draws deterministic for a given engine
/// state, independent of any standard-library distribution internals.
inline std::uint64_t uniform_below(Rng& rng, std::uint64_t n) {
    const std::uint64_t threshold = (0 - n) % n;  // (2^64 - n) mod n
    for (;;) {
        const std::uint64_t r = rng();
        if (r >= threshold) {
            return r % n;
        }
    }
}

/// Uniform double in [0, 1), 53 bits of the raw draw.
inline double uniform01(Rng& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline std::uint64_t fnv1a64(std::string_view s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (const char c : s) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001b3ULL;
    }
    return h;
}

/// Derived seed for repetition `rep` of the experiment arm named `arm`.
/// Pure, so reruns and cross-arm pairings are reproducible.
inline std::uint64_t derive_seed(std::uint64_t master, std::string_view arm, std::uint64_t rep) {
    return splitmix64(splitmix64(master ^ fnv1a64(arm)) + rep);
}

}  // namespace tsgen
