#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace hss {

using Rng = std::mt19937_64;

/// SplitMix64 finalizer; used to decorrelate seeds.
std::uint64_t mix64(std::uint64_t x);

/// Seed of an independent substream keyed by (base, tags...).
/// The result depends only on its arguments, never on call order.
std::uint64_t substream_seed(std::uint64_t base, std::initializer_list<std::uint64_t> tags);

inline Rng make_rng(std::uint64_t base, std::initializer_list<std::uint64_t> tags) {
  return Rng(substream_seed(base, tags));
}

/// Uniform double in [0, 1) built from the top 53 bits; identical on every platform.
inline double uniform01(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// Uniform double in (0, 1); safe as input to inverse CDFs.
inline double uniform_open01(Rng& rng) {
  return (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53;
}

/// Standard normal draw by inversion (portable across standard libraries).
double standard_normal(Rng& rng);

// Stage tags for substream derivation.
namespace stage {
inline constexpr std::uint64_t topology = 0x746f706f;
inline constexpr std::uint64_t known_shadow = 0x73686431;
inline constexpr std::uint64_t sample_bank = 0x62616e6b;
inline constexpr std::uint64_t random_schedule = 0x72616e64;
inline constexpr std::uint64_t satellite_choice = 0x73617463;
}  // namespace stage

}  // namespace hss
