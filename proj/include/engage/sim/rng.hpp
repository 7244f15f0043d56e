// SPDX-License-Identifier: Apache-2.0
// rng.hpp
// Seed derivation for per-session random streams.
#pragma once

#include <cstdint>

namespace engage::sim {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

// Independent stream for session `index` of a run seeded with `seed`; adding
// sessions never changes the streams of existing ones.
inline std::uint64_t session_seed(std::uint64_t seed, std::uint64_t index) {
  return splitmix64(splitmix64(seed) ^ splitmix64(index + 0x5E55'10E5ULL));
}

}  // namespace engage::sim
