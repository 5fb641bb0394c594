#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

namespace hetenc::nn {

// All randomness in the project goes through these helpers rather than
// std::*_distribution, whose algorithms are implementation-defined. Given the
// same seed the draws are identical on every platform.

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

// Independent deterministic stream derived from a base seed and tags.
inline std::mt19937_64 rng_stream(std::uint64_t seed, std::uint64_t tag0,
                                  std::uint64_t tag1 = 0) {
  return std::mt19937_64(splitmix64(splitmix64(seed ^ tag0) ^ (tag1 * 0xd6e8feb86659fd93ull)));
}

// Uniform double in [0, 1) with 53 random bits.
inline double uniform_unit(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Uniform integer in [0, bound).
inline std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t bound) {
  return rng() % bound;
}

// Standard normal via Box-Muller.
inline double normal_unit(std::mt19937_64& rng) {
  double u1 = uniform_unit(rng);
  if (u1 < 1e-300) u1 = 1e-300;
  const double u2 = uniform_unit(rng);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

template <typename T>
void shuffle_indices(std::vector<T>& v, std::mt19937_64& rng) {
  for (std::size_t i = v.size(); i > 1; --i) {
    std::swap(v[i - 1], v[uniform_below(rng, i)]);
  }
}

}  // namespace hetenc::nn
