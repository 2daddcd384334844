#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace sartex::random {

/// SplitMix64 finalizer; used to derive independent child seeds.
constexpr std::uint64_t mix(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

/// Seed for child `index` of stream `seed` (tree i of a forest, sample i of a
/// synthetic dataset, ...). Depends only on its arguments, so parallel and
/// sequential runs draw identical streams.
constexpr std::uint64_t derive(std::uint64_t seed, std::uint64_t index, std::uint64_t salt = 0) {
  return mix(mix(seed ^ mix(salt)) + index);
}

using Engine = std::mt19937_64;

/// The helpers below avoid std::*_distribution, whose output differs between
/// standard library implementations.

/// Uniform double in [0, 1).
inline double uniform01(Engine& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

/// Uniform double in (0, 1].
inline double uniform01_open_low(Engine& rng) {
  return static_cast<double>((rng() >> 11) + 1) * 0x1.0p-53;
}

inline double uniform(Engine& rng, double lo, double hi) { return lo + (hi - lo) * uniform01(rng); }

/// Uniform integer in [0, n), n > 0. Draws above the largest multiple of n
/// are rejected so every residue is equally likely.
inline std::uint64_t uniform_index(Engine& rng, std::uint64_t n) {
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
  std::uint64_t x = rng();
  while (x >= limit) x = rng();
  return x % n;
}

/// Exponential variate with the given mean, never exactly zero.
inline double exponential(Engine& rng, double mean) { return -mean * std::log(uniform01_open_low(rng)); }

}  // namespace sartex::random
