#pragma once

// Per-shot seed derivation shared by the annealer and the circuit simulator.
//
// seed(master, k) = splitmix64_mix(master ^ (k * 0x9E3779B97F4A7C15))
//
// splitmix64_mix is the SplitMix64 output finalizer (Steele, Lea, Flood 2014).
// The derived seed initializes a std::mt19937_64 owned by the shot, so the
// result of shot k depends only on (master, k), never on thread scheduling.

#include <cstdint>
#include <random>

namespace qaf {

constexpr std::uint64_t splitmix64_mix(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t shot) {
  return splitmix64_mix(master ^ (shot * 0x9E3779B97F4A7C15ULL));
}

using ShotRng = std::mt19937_64;

/// Uniform double in [0, 1) from the top 53 bits of one engine draw.
inline double uniform01(ShotRng& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

}  // namespace qaf
