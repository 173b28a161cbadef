#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace rgglab {

/// The single generator used everywhere. Reports carry kEngineName next to every seed.
using Engine = std::mt19937_64;
inline constexpr std::string_view kEngineName = "mt19937_64";

/// SplitMix64 finalizer.
std::uint64_t splitmix64(std::uint64_t x) noexcept;

/// Seed of the stream with the given index: splitmix64(seed ^ splitmix64(index + 1)).
/// Trials, rows and sweep points all draw from derived streams, so results do not depend
/// on how work is scheduled across threads.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) noexcept;

inline Engine make_engine(std::uint64_t seed, std::uint64_t index) {
  return Engine{derive_seed(seed, index)};
}

/// Uniform double in [0, 1) from the top 53 bits.
inline double uniform01(Engine& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace rgglab
