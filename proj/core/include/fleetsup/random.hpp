#pragma once

// Portable random helpers. std::mt19937_64 is bit-exact across standard
// libraries, but the std distributions are not, so doubles are derived here.

#include <cstdint>
#include <random>

namespace fleetsup {

constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Order-sensitive combination of 64-bit keys into one seed.
constexpr std::uint64_t hash_combine(std::uint64_t seed, std::uint64_t value) {
  return splitmix64(seed ^ splitmix64(value + 0x632be59bd9b4e019ULL));
}

/// Maps 64 random bits to a double in (0, 1].
constexpr double bits_to_unit_open_closed(std::uint64_t bits) {
  return static_cast<double>((bits >> 11) + 1) * 0x1.0p-53;
}

/**
 * Counter-based uniform draw in (0, 1] keyed by (seed, stream, counter).
 *
 * Each (seed, stream) pair is an independent substream; the value of draw
 * `counter` does not depend on how many other draws were made.
 */
constexpr double counter_uniform(std::uint64_t seed, std::uint64_t stream, std::uint64_t counter) {
  return bits_to_unit_open_closed(hash_combine(hash_combine(seed, stream), counter));
}

using Engine = std::mt19937_64;

/// Uniform double in [lo, hi).
inline double uniform(Engine& rng, double lo, double hi) {
  const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
  return lo + (hi - lo) * u;
}

}  // namespace fleetsup
