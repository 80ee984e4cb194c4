#pragma once

#include <cstdint>
#include <random>

namespace cyclic {

// All randomness flows through a 64-bit Mersenne Twister; each of its draws
// is one uniform tick on the circle.
using RandomStream = std::mt19937_64;

inline constexpr const char* kStreamEngineName = "mt19937_64";
inline constexpr const char* kStreamMixName = "splitmix64";

/// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Seed of stream `index` under master seed `seed`. Streams are a pure function
/// of (seed, index), so results do not depend on how work is scheduled.
constexpr std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t index) noexcept {
  return mix64(mix64(seed) ^ mix64(index + 0x632be59bd9b4e019ULL));
}

inline RandomStream make_stream(std::uint64_t seed, std::uint64_t index) {
  return RandomStream(stream_seed(seed, index));
}

}  // namespace cyclic
