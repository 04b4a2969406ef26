#pragma once

#include <cmath>
#include <cstdint>
#include <limits>

namespace nhs {

/// SplitMix64 finaliser; a bijective 64-bit mixer.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Key for an independent substream, derived from a base seed and a counter
/// (trial index, sweep point, ...). Depends only on its inputs.
constexpr std::uint64_t derive_key(std::uint64_t seed, std::uint64_t counter) {
  return mix64(mix64(seed ^ 0x6a09e667f3bcc909ULL) + mix64(counter + 0x9e3779b97f4a7c15ULL));
}

/// Counter-based generator: the i-th output is mix64(key + (i+1) * golden).
/// Satisfies UniformRandomBitGenerator, so it also plugs into <random>.
class CounterRng {
 public:
  using result_type = std::uint64_t;

  explicit constexpr CounterRng(std::uint64_t key) : key_(key) {}
  constexpr CounterRng(std::uint64_t seed, std::uint64_t counter)
      : key_(derive_key(seed, counter)) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  constexpr result_type operator()() {
    ++counter_;
    return mix64(key_ + counter_ * 0x9e3779b97f4a7c15ULL);
  }

  /// Uniform double in the open interval (0, 1).
  double uniform() { return (double((*this)() >> 11) + 0.5) * 0x1.0p-53; }

  /// Exponential variate with the given rate, by inversion.
  double exponential(double rate) { return -std::log(uniform()) / rate; }

  std::uint64_t key() const { return key_; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace nhs
