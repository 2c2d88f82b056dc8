#pragma once

#include <cstdint>
#include <random>

namespace jpdsr {

/// Stream tags for seed derivation. Each per-frame stage draws from its own engine.
enum class RngStream : std::uint64_t {
  PairSampler = 1,
  Camera = 2,
  Overlay = 3,
  Response = 4,
};

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

/// Engine for one frame and stage: seeded from (master ^ frame) mixed with the stream tag.
inline std::mt19937_64 frame_engine(std::uint64_t master_seed, std::uint64_t frame, RngStream stream) {
  const std::uint64_t base = master_seed ^ frame;
  return std::mt19937_64(splitmix64(splitmix64(base) ^ static_cast<std::uint64_t>(stream)));
}

}  // namespace jpdsr
