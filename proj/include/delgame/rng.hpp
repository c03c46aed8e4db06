#pragma once

#include <cstdint>
#include <cmath>
#include <random>
#include <vector>

namespace delgame {

// All randomness in the library flows through this wrapper. The engine is
// mt19937_64 (fully specified by the C++ standard); every sampler below is
// hand-rolled on top of raw engine output so that results do not depend on
// the standard library's unspecified distribution algorithms. Sub-streams
// are derived with a splitmix64 finalizer over (seed, stream) pairs.
inline constexpr const char* kRngAlgorithm = "mt19937_64+splitmix64-streams";

inline std::uint64_t splitmix64_finalize(std::uint64_t x) {
  x ^= x >> 30;
  x *= 0xBF58476D1CE4E5B9ULL;
  x ^= x >> 27;
  x *= 0x94D049BB133111EBULL;
  x ^= x >> 31;
  return x;
}

// Derives an independent seed for sub-stream `stream` of `seed`.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  return splitmix64_finalize(seed + 0x9E3779B97F4A7C15ULL * (stream + 1));
}

inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a,
                                 std::uint64_t b) {
  return derive_seed(derive_seed(seed, a), b);
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(splitmix64_finalize(seed)) {}

  std::uint64_t next_u64() { return engine_(); }

  // Uniform in [0, 1) with 53 random mantissa bits.
  double uniform01() { return (next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  // Unbiased integer in [0, n) by rejection.
  std::uint64_t below(std::uint64_t n) {
    const std::uint64_t threshold = -n % n;  // 2^64 mod n
    for (;;) {
      std::uint64_t x = next_u64();
      if (x >= threshold) return x % n;
    }
  }

  int uniform_int(int lo, int hi) {  // inclusive bounds
    return lo + static_cast<int>(below(static_cast<std::uint64_t>(hi - lo) + 1));
  }

  bool bernoulli(double p) { return uniform01() < p; }

  // Marsaglia polar method; no state is cached so calls stay independent.
  double normal(double mean, double stddev) {
    double u, v, s;
    do {
      u = 2.0 * uniform01() - 1.0;
      v = 2.0 * uniform01() - 1.0;
      s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    return mean + stddev * u * std::sqrt(-2.0 * std::log(s) / s);
  }

  // Normal truncated to [lo, hi] by rejection.
  double truncated_normal(double mean, double stddev, double lo, double hi) {
    for (;;) {
      double x = normal(mean, stddev);
      if (x >= lo && x <= hi) return x;
    }
  }

  template <typename T>
  void shuffle(std::vector<T>& v) {  // Fisher-Yates
    for (std::size_t i = v.size(); i > 1; --i) {
      std::size_t j = static_cast<std::size_t>(below(i));
      std::swap(v[i - 1], v[j]);
    }
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace delgame
