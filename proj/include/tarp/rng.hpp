#pragma once

#include <cstdint>
#include <random>

namespace tarp {

/// Seeded random stream with platform-independent draws.
///
/// The standard library engines are fully specified, but the distributions
/// in <random> are not, so the same seed can give different variates across
/// standard library implementations. All variates used by the library are
/// produced here from the raw 64-bit engine output instead.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t bits() { return engine_(); }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Uniform on (0, 1).
  double uniform_open() {
    double u;
    do {
      u = uniform();
    } while (u == 0.0);
    return u;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Uniform integer on [lo, hi] (inclusive), unbiased by rejection.
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi);

  bool bernoulli(double p) { return uniform() < p; }

  /// Standard normal via the Marsaglia polar method (no cached second draw,
  /// so the stream position depends only on the number of calls).
  double normal();

  /// Gamma(shape, 1) via Marsaglia-Tsang.
  double gamma(double shape);

 private:
  std::mt19937_64 engine_;
};

/// Derives an independent child seed from a parent seed and a stream index.
std::uint64_t derive_seed(std::uint64_t parent, std::uint64_t index);

}  // namespace tarp
