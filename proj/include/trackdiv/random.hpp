// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>

namespace trackdiv {

/// Counter-based SplitMix64: draw i of stream `seed` is a pure function of
/// (seed, i), so trials can be split across workers without changing values.
class SplitMix64 {
 public:
  explicit constexpr SplitMix64(std::uint64_t seed) noexcept : seed_(seed) {}

  static constexpr std::uint64_t mix(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  constexpr std::uint64_t at(std::uint64_t index) const noexcept {
    return mix(seed_ + (index + 1) * 0x9e3779b97f4a7c15ULL);
  }

  /// Uniform on the open interval (0, 1); never returns an endpoint.
  constexpr double uniform_open(std::uint64_t index) const noexcept {
    return (static_cast<double>(at(index) >> 11) + 0.5) * 0x1.0p-53;
  }

  constexpr std::uint64_t next() noexcept { return at(counter_++); }
  constexpr double next_uniform_open() noexcept { return uniform_open(counter_++); }

  constexpr std::uint64_t seed() const noexcept { return seed_; }

 private:
  std::uint64_t seed_;
  std::uint64_t counter_ = 0;
};

}  // namespace trackdiv
