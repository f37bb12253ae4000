#pragma once

#include <cstdint>
#include <random>

namespace carleman {

/// SplitMix64 finalizer; decorrelates (seed, index) pairs.
inline std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Seed of trial `index` in a batch seeded by `seed`.
inline std::uint64_t trial_seed(std::uint64_t seed, std::uint64_t index) noexcept {
  return splitmix64(splitmix64(seed) ^ index);
}

inline std::mt19937_64 trial_rng(std::uint64_t seed, std::uint64_t index) { return std::mt19937_64(trial_seed(seed, index)); }

}  // namespace carleman
