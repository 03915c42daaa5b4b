#pragma once

#include "uninorm/group.hpp"
#include "uninorm/random.hpp"
#include "uninorm/tensor.hpp"

#include <cmath>
#include <cstdint>
#include <vector>

namespace testing {

inline std::vector<double> to_vector(std::span<const double> v) { return {v.begin(), v.end()}; }

inline uninorm::GroupFunction random_function(std::int64_t n, std::uint64_t seed, double lo = -1.0, double hi = 1.0) {
  uninorm::Rng rng(seed);
  return uninorm::GroupFunction(uninorm::FiniteAbelianGroup::cyclic(n),
                                rng.uniforms(static_cast<std::size_t>(n), lo, hi));
}

inline uninorm::TensorFunction random_tensor(std::int64_t V, int s, std::uint64_t seed, double lo = -1.0,
                                             double hi = 1.0) {
  uninorm::Rng rng(seed);
  std::size_t size = 1;
  for (int i = 0; i < s; ++i) size *= static_cast<std::size_t>(V);
  return uninorm::TensorFunction(V, s, rng.uniforms(size, lo, hi));
}

inline bool rel_close(double a, double b, double tol) {
  return std::abs(a - b) <= tol * std::max({1.0, std::abs(a), std::abs(b)});
}

}  // namespace testing
