#pragma once

#include <cstdint>
#include <limits>

namespace blockham {

// SplitMix64 finalizer. Bijective on 64-bit words.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Seed of an independent stream, derived from a master seed and a path of
/// indices (e.g. window point, trial). Scheduling never enters the result.
std::uint64_t stream_seed(std::uint64_t master, std::uint64_t index) noexcept;
std::uint64_t stream_seed(std::uint64_t master, std::uint64_t a,
                          std::uint64_t b) noexcept;

/// Counter-based generator: the i-th output is a keyed hash of i, so a
/// stream is fully described by (key, counter) and can be split or skipped
/// without replaying it. Satisfies UniformRandomBitGenerator.
class CounterRng {
 public:
  using result_type = std::uint64_t;

  explicit CounterRng(std::uint64_t key) noexcept : key_(mix64(key)) {}

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept {
    return std::numeric_limits<result_type>::max();
  }

  result_type operator()() noexcept {
    return mix64(key_ ^ mix64(counter_++ * 0xd1342543de82ef95ULL));
  }

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform() noexcept {
    return static_cast<double>((*this)() >> 11) * 0x1.0p-53;
  }

  /// Uniform double in (0, 1]; safe as an argument to log().
  double uniform_pos() noexcept {
    return static_cast<double>(((*this)() >> 11) + 1) * 0x1.0p-53;
  }

  bool bernoulli(double p) noexcept { return uniform() < p; }

  /// Uniform integer in [0, bound). bound must be positive.
  std::uint64_t below(std::uint64_t bound) noexcept;

  std::uint64_t counter() const noexcept { return counter_; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

/// Number of failures before the next success of a Bernoulli(p) sequence,
/// 0 < p < 1. Used to skip over absent pairs when sampling sparse graphs.
std::uint64_t geometric_skip(CounterRng& rng, double log1m_p) noexcept;

}  // namespace blockham
