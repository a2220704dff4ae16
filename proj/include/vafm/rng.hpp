#pragma once

#include <cstdint>

namespace vafm {

/// SplitMix64 (Steele, Lea & Flood 2014). Output is a pure function of the
/// 64-bit state, so streams are identical on every platform and in every
/// language that implements the same three-step mix.
class Rng {
 public:
  static constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ULL;

  constexpr explicit Rng(std::uint64_t seed) noexcept : state_(seed) {}

  static constexpr std::uint64_t mix(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  /// Child stream `index` of `seed`: seeded with the index-th output of the
  /// parent stream, computed directly so it does not depend on how many
  /// values any other stream has consumed.
  static constexpr Rng derive(std::uint64_t seed, std::uint64_t index) noexcept {
    return Rng(mix(seed + (index + 1) * kGamma));
  }

  constexpr std::uint64_t next_u64() noexcept {
    state_ += kGamma;
    return mix(state_);
  }

  /// Uniform double in [0, 1) from the top 53 bits.
  constexpr double uniform() noexcept {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  constexpr std::uint64_t state() const noexcept { return state_; }

 private:
  std::uint64_t state_;
};

}  // namespace vafm
