#pragma once

// Portable random helpers. std::mt19937_64 is fully specified by the standard,
// but the std::*_distribution adaptors are not, so the value transforms used
// for anything that ends up in a trace or fixture live here.

#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <random>

namespace fsim::rng {

constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Uniform in [0, 1) with 53 random bits.
constexpr double to_unit(std::uint64_t bits) noexcept {
  return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

inline double uniform(std::mt19937_64& gen) { return to_unit(gen()); }

/// Uniform integer in [0, n). Rejection sampling, so no modulo bias.
inline std::uint64_t below(std::mt19937_64& gen, std::uint64_t n) {
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % n;
  std::uint64_t x;
  do {
    x = gen();
  } while (x >= limit);
  return x % n;
}

inline bool bernoulli(std::mt19937_64& gen, double p) { return uniform(gen) < p; }

/// Standard normal from two uniforms (Box-Muller, cosine branch).
inline double standard_normal(double u1, double u2) {
  const double r = std::sqrt(-2.0 * std::log(1.0 - u1));
  return r * std::cos(2.0 * std::numbers::pi * u2);
}

inline double normal(std::mt19937_64& gen, double mean, double sigma) {
  const double u1 = uniform(gen);
  const double u2 = uniform(gen);
  return mean + sigma * standard_normal(u1, u2);
}

}  // namespace fsim::rng
