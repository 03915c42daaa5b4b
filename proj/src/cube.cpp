#include "cube.hpp"

#include "parallel.hpp"
#include "uninorm/summation.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <string>

#include "uninorm/error.hpp"

namespace uninorm::detail {

namespace {
constexpr std::int64_t kTableLimit = 1024;
}

Adder::Adder(const FiniteAbelianGroup& group) : group_(group), n_(group.order()) {
  if (n_ <= kTableLimit) table_ = group.addition_table();
}

void cube_offsets(const Adder& add, std::span<const std::int64_t> h, std::vector<std::int64_t>& offsets) {
  const std::size_t count = std::size_t{1} << h.size();
  offsets.resize(count);
  offsets[0] = 0;
  for (std::size_t m = 1; m < count; ++m) {
    const auto low = static_cast<std::size_t>(std::countr_zero(m));
    offsets[m] = add(offsets[m & (m - 1)], h[low]);
  }
}

double marginal_at(const Adder& add, int s, std::span<const double* const> g, std::int64_t x) {
  const std::int64_t n = add.order();
  std::vector<std::int64_t> h(static_cast<std::size_t>(s), 0);
  std::vector<std::int64_t> offsets;
  PairwiseAccumulator acc;
  do {
    cube_offsets(add, h, offsets);
    double prod = 1.0;
    for (std::size_t m = 1; m < offsets.size() && prod != 0.0; ++m) {
      prod *= g[m - 1][add(x, offsets[m])];
    }
    acc.add(prod);
  } while (next_tuple(h, n));
  return acc.sum() / static_cast<double>(acc.count());
}

void marginal_serial(const Adder& add, int s, std::span<const double* const> g, std::span<double> out) {
  for (std::int64_t x = 0; x < add.order(); ++x) out[static_cast<std::size_t>(x)] = marginal_at(add, s, g, x);
}

void marginal_parallel(const Adder& add, int s, std::span<const double* const> g, std::span<double> out) {
  const std::int64_t n = add.order();
#pragma omp parallel for schedule(dynamic, 1)
  for (std::int64_t x = 0; x < n; ++x) out[static_cast<std::size_t>(x)] = marginal_at(add, s, g, x);
}

double root_of_cube_average(double average, double power, double scale) {
  if (average < 0.0) {
    if (average >= -1e-12 * std::max(1.0, scale)) return 0.0;
    throw Error(ErrorKind::invalid_input, "negative cube average " + std::to_string(average));
  }
  return std::pow(average, 1.0 / power);
}

}  // namespace uninorm::detail
