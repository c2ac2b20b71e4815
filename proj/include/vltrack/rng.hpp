#pragma once

#include <cstdint>
#include <limits>
#include <random>

namespace vltrack {

/// Unbiased integer in [0, n) via rejection sampling. Avoids
/// std::uniform_int_distribution's implementation-defined draw sequence so
/// seeded runs stay reproducible across standard libraries.
inline uint64_t bounded_uniform(std::mt19937_64& rng, uint64_t n) {
  const uint64_t max = std::numeric_limits<uint64_t>::max();
  const uint64_t limit = max - max % n;
  uint64_t draw = rng();
  while (draw >= limit) {
    draw = rng();
  }
  return draw % n;
}

/// Uniform double in [0, 1) with 53 random mantissa bits.
inline double uniform_unit(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// Uniform double in [-1, 1).
inline double uniform_symmetric(std::mt19937_64& rng) {
  return 2.0 * uniform_unit(rng) - 1.0;
}

}  // namespace vltrack
