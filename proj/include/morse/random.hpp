#pragma once

#include <cstdint>
#include <random>

namespace morse {

/// Engine used for every seeded corpus. std::mt19937_64 is fully specified by
/// the standard, so a seed yields the same stream on every conforming platform.
using Rng = std::mt19937_64;

/// Uniform double in [0, 1) built from the top 53 bits of one engine output.
/// Standard distributions are avoided because their algorithms are
/// implementation defined.
inline double unit_uniform(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// Integer in [lo, hi] (inclusive) by plain modulo reduction of one engine output.
inline std::uint64_t uniform_between(Rng& rng, std::uint64_t lo, std::uint64_t hi) {
  return lo + rng() % (hi - lo + 1);
}

}  // namespace morse
