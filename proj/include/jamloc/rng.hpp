// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <random>

namespace jamloc {

using Rng = std::mt19937_64;

/// SplitMix64 finalizer; a bijection on 64-bit words.
constexpr std::uint64_t splitmix64(std::uint64_t z) {
    z += 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

/// Seed of child stream `index` of a parent seed. Distinct indices of one parent map to
/// distinct seeds, so sibling streams never alias.
constexpr std::uint64_t derive_seed(std::uint64_t parent, std::uint64_t index) {
    return splitmix64(splitmix64(parent) ^ splitmix64(index ^ 0xD1B54A32D192ED03ULL));
}

inline Rng make_stream(std::uint64_t parent, std::uint64_t index) { return Rng{derive_seed(parent, index)}; }

}  // namespace jamloc
