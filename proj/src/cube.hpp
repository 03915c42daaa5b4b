#pragma once

#include "uninorm/group.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace uninorm::detail {

/// Group addition on element codes, table-driven for small groups.
class Adder {
 public:
  explicit Adder(const FiniteAbelianGroup& group);

  std::int64_t order() const noexcept { return n_; }

  std::int64_t operator()(std::int64_t a, std::int64_t b) const noexcept {
    if (!table_.empty()) return table_[static_cast<std::size_t>(a * n_ + b)];
    return group_.add(a, b);
  }

 private:
  FiniteAbelianGroup group_;
  std::int64_t n_;
  std::vector<std::int32_t> table_;
};

/// Fills offsets[m] = sum_{i in m} h_i for every bitmask m < 2^s.
void cube_offsets(const Adder& add, std::span<const std::int64_t> h, std::vector<std::int64_t>& offsets);

/// E_h prod_{m=1}^{2^s-1} g[m-1](x + m.h) at a single point x (serial).
double marginal_at(const Adder& add, int s, std::span<const double* const> g, std::int64_t x);

/// The whole marginal x -> E_h prod g (serial over x).
void marginal_serial(const Adder& add, int s, std::span<const double* const> g, std::span<double> out);

/// Same, parallel over x.
void marginal_parallel(const Adder& add, int s, std::span<const double* const> g, std::span<double> out);

/// power-th root of a nonnegative cube average; float residue below zero
/// (relative to `scale`) is clamped.
double root_of_cube_average(double average, double power, double scale);

inline double sign_of(double v) noexcept { return v >= 0.0 ? 1.0 : -1.0; }

}  // namespace uninorm::detail
