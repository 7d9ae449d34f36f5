#pragma once

#include <cmath>
#include <cstdint>

#include "steerbound/common.hpp"

namespace steerbound {

/// Counter-based generator: every draw is a pure function of (seed, counter),
/// so any parallel decomposition of a simulation reproduces the serial
/// results bit for bit. SplitMix64 finalizer over a Weyl sequence.
namespace rng {

inline std::uint64_t mix(std::uint64_t x) {
  x ^= x >> 30;
  x *= 0xBF58476D1CE4E5B9ull;
  x ^= x >> 27;
  x *= 0x94D049BB133111EBull;
  x ^= x >> 31;
  return x;
}

inline std::uint64_t hash(std::uint64_t seed, std::uint64_t counter) {
  return mix(mix(seed + 0x9E3779B97F4A7C15ull) +
             counter * 0x9E3779B97F4A7C15ull);
}

/// Derives an independent stream seed; used to key per-trial noise fields
/// and the theta* sequence off one master seed.
inline std::uint64_t derive(std::uint64_t seed, std::uint64_t stream) {
  return mix(hash(seed, stream) ^ 0xD1B54A32D192ED03ull);
}

/// Uniform on (0, 1), never exactly 0 or 1 (53-bit mantissa midpoints).
inline double uniform(std::uint64_t seed, std::uint64_t counter) {
  return (static_cast<double>(hash(seed, counter) >> 11) + 0.5) * 0x1.0p-53;
}

/// Two independent standard normal draws from one counter (Box-Muller).
inline void gauss_pair(std::uint64_t seed, std::uint64_t counter, double& g0,
                       double& g1) {
  const double u1 = uniform(seed, 2 * counter);
  const double u2 = uniform(seed, 2 * counter + 1);
  const double r = std::sqrt(-2.0 * std::log(u1));
  g0 = r * std::cos(2.0 * kPi * u2);
  g1 = r * std::sin(2.0 * kPi * u2);
}

}  // namespace rng
}  // namespace steerbound
