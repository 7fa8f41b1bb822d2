#pragma once

// Counter-based random draws: every value is a pure function of
// (seed, stream, counter), so rounds can be partitioned across workers in
// any way without changing a single draw. Two chained SplitMix64 steps.

#include <cstdint>

namespace qgame {

inline constexpr std::uint64_t kGoldenGamma = 0x9E3779B97F4A7C15ull;

constexpr std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

constexpr std::uint64_t counter_u64(std::uint64_t seed, std::uint64_t stream,
                                    std::uint64_t counter) {
  const std::uint64_t stream_seed = mix64(seed + kGoldenGamma * (stream + 1));
  return mix64(stream_seed + kGoldenGamma * (counter + 1));
}

/// Uniform double in [0, 1) from the top 53 bits.
constexpr double to_unit(std::uint64_t bits) {
  return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

constexpr double counter_unit(std::uint64_t seed, std::uint64_t stream,
                              std::uint64_t counter) {
  return to_unit(counter_u64(seed, stream, counter));
}

}  // namespace qgame
