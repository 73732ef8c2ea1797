#pragma once

// Portable random streams.
//
// Engine: std::mt19937_64, whose output sequence is fixed by the C++
// standard. A stream for (seed, index) is seeded with
// splitmix64(seed XOR index). Doubles take the top 53 bits of one draw;
// bounded integers use rejection sampling on a single draw. None of the
// <random> distributions are used, so streams agree across standard
// libraries and can be replayed in other languages.

#include <cstdint>
#include <random>
#include <span>
#include <utility>

namespace homcount {

std::uint64_t splitmix64(std::uint64_t x);

class Rng {
 public:
  using result_type = std::uint64_t;

  explicit Rng(std::uint64_t seed) : engine_(splitmix64(seed)) {}
  /// Independent stream number `index` derived from `seed`.
  static Rng substream(std::uint64_t seed, std::uint64_t index) { return Rng(seed ^ index); }

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return ~result_type{0}; }
  result_type operator()() { return engine_(); }

  /// Uniform in [0, 1).
  double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  /// Uniform in [0, bound); bound must be positive.
  std::uint64_t below(std::uint64_t bound);
  /// Uniform in [lo, hi].
  std::uint64_t between(std::uint64_t lo, std::uint64_t hi) { return lo + below(hi - lo + 1); }
  bool bernoulli(double p) { return uniform01() < p; }

  template <typename T>
  void shuffle(std::span<T> items) {
    for (std::size_t i = items.size(); i > 1; --i) std::swap(items[i - 1], items[below(i)]);
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace homcount
