#pragma once

#include "uninorm/summation.hpp"

#include <cstdint>
#include <vector>

namespace uninorm::detail {

/// Sum of term(i) for i in [0, n): terms are evaluated in parallel into a
/// buffer and reduced pairwise, so the result is independent of the
/// thread count.
template <class Term>
double parallel_sum(std::int64_t n, Term&& term) {
  std::vector<double> partial(static_cast<std::size_t>(n));
#pragma omp parallel for schedule(dynamic, 1)
  for (std::int64_t i = 0; i < n; ++i) partial[static_cast<std::size_t>(i)] = term(i);
  return pairwise_sum(partial);
}

/// Fills out[i] = term(i) in parallel.
template <class Term>
void parallel_fill(std::vector<double>& out, Term&& term) {
  const auto n = static_cast<std::int64_t>(out.size());
#pragma omp parallel for schedule(static)
  for (std::int64_t i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = term(i);
}

/// Odometer over {0..base-1}^digits, last digit fastest.
inline bool next_tuple(std::vector<std::int64_t>& digits, std::int64_t base) {
  for (std::size_t i = digits.size(); i-- > 0;) {
    if (++digits[i] < base) return true;
    digits[i] = 0;
  }
  return false;
}

}  // namespace uninorm::detail
