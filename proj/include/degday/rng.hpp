#pragma once

#include <cstdint>

#include "degday/normal.hpp"

namespace degday {

// Counter-based generator: draw i of stream s under a seed is a pure hash of
// (seed, s, i), so any path can be regenerated in isolation and parallel
// generation is bit-identical to sequential generation. One stream per Monte
// Carlo path.
class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::uint64_t stream)
      : base_(mix(mix(seed + kG0) ^ (stream * kG1 + kG2))), counter_(0) {}

  std::uint64_t next_word() { return mix(base_ + (++counter_) * kG0); }

  // Uniform on the open interval (0, 1): top 53 bits, offset by half an ulp.
  double uniform() {
    return (static_cast<double>(next_word() >> 11) + 0.5) * 0x1.0p-53;
  }

  // Standard normal via inverse-CDF transform (monotone in the uniform, which
  // keeps common-random-number comparisons well behaved).
  double normal() { return norm_quantile(uniform()); }

  static std::uint64_t word(std::uint64_t seed, std::uint64_t stream, std::uint64_t index) {
    CounterRng rng(seed, stream);
    rng.counter_ = index;
    return rng.next_word();
  }

 private:
  // SplitMix64 finalizer: full-avalanche 64-bit mix.
  static std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  static constexpr std::uint64_t kG0 = 0x9e3779b97f4a7c15ULL;
  static constexpr std::uint64_t kG1 = 0xbf58476d1ce4e5b9ULL;
  static constexpr std::uint64_t kG2 = 0x94d049bb133111ebULL;

  std::uint64_t base_;
  std::uint64_t counter_;
};

}  // namespace degday
