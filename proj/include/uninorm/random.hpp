#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace uninorm {

/// Seeded generator with platform-independent derived distributions.
///
/// std::mt19937_64 output is fixed by the standard, but the standard
/// distributions are not, so uniform reals, signs and bounded integers
/// are derived here by hand.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  /// Uniform in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// +1 or -1 with equal probability.
  double sign() { return (engine_() >> 63) != 0 ? -1.0 : 1.0; }

  /// Uniform integer in [0, bound), bound >= 1 (rejection sampling).
  std::uint64_t below(std::uint64_t bound);

  std::vector<double> signs(std::size_t n);
  std::vector<double> uniforms(std::size_t n, double lo, double hi);

  /// Uniformly random subset of {0, ..., n-1} of exactly `size` elements,
  /// returned in increasing order.
  std::vector<std::int64_t> subset(std::int64_t n, std::int64_t size);

 private:
  std::mt19937_64 engine_;
};

/// Derives an independent stream seed from a base seed and a tag
/// (splitmix64 finalizer).
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t tag);

}  // namespace uninorm
