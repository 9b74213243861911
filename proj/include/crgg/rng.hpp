#pragma once

#include <cstdint>

namespace crgg::rng {

/// SplitMix64 output function (Stafford variant 13). Bijective on 64-bit words.
inline std::uint64_t mix64(std::uint64_t x) {
  x ^= x >> 30;
  x *= 0xbf58476d1ce4e5b9ULL;
  x ^= x >> 27;
  x *= 0x94d049bb133111ebULL;
  x ^= x >> 31;
  return x;
}

inline constexpr std::uint64_t kGamma = 0x9e3779b97f4a7c15ULL;

/// Position `index` of the SplitMix64 stream seeded at `seed`.
inline std::uint64_t at(std::uint64_t seed, std::uint64_t index) {
  return mix64(seed + (index + 1) * kGamma);
}

/// Order-sensitive seed derivation; avalanching on every word.
inline std::uint64_t derive(std::uint64_t seed, std::uint64_t salt) {
  return mix64(seed ^ (salt + kGamma + (seed << 6) + (seed >> 2)));
}

}  // namespace crgg::rng
