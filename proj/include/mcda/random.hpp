#pragma once

#include <cstdint>

namespace mcda {

inline constexpr std::uint64_t kGoldenGamma = 0x9E3779B97F4A7C15ull;

/// SplitMix64 output mixer.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

/*!
 * SplitMix64 generator.
 *
 * Every random quantity in the library comes from a `stream(seed, index)`:
 * the starting state is `seed ^ mix64(index * kGoldenGamma)` and the k-th
 * draw is the k-th output of the generator. Results therefore depend only on
 * (seed, index, k), never on scheduling.
 */
class SplitMix64 {
 public:
  constexpr explicit SplitMix64(std::uint64_t state) noexcept : state_(state) {}

  static constexpr SplitMix64 stream(std::uint64_t seed, std::uint64_t index) noexcept {
    return SplitMix64(seed ^ mix64(index * kGoldenGamma));
  }

  constexpr std::uint64_t operator()() noexcept {
    state_ += kGoldenGamma;
    return mix64(state_);
  }

  /// Uniform double in [0, 1) with 53 random bits.
  constexpr double uniform() noexcept {
    return static_cast<double>((*this)() >> 11) * 0x1.0p-53;
  }

  /// Uniform double in [lo, hi).
  constexpr double uniform(double lo, double hi) noexcept { return lo + (hi - lo) * uniform(); }

  constexpr std::uint64_t state() const noexcept { return state_; }

 private:
  std::uint64_t state_;
};

}  // namespace mcda
