#include "uninorm/summation.hpp"

namespace uninorm {

void PairwiseAccumulator::flush_block() noexcept {
  double carry = block_;
  block_ = 0.0;
  in_block_ = 0;
  // Binary-counter merge: level k holds a sum of 2^k blocks when bit k of
  // count_ is set.
  std::size_t c = count_;
  std::size_t level = 0;
  while (c & 1U) {
    carry = levels_[level] + carry;
    levels_[level] = 0.0;
    c >>= 1U;
    ++level;
  }
  levels_[level] = carry;
  ++count_;
}

double PairwiseAccumulator::sum() const noexcept {
  double total = 0.0;
  for (std::size_t level = 0; level < kLevels; ++level) {
    if ((count_ >> level) & 1U) total = levels_[level] + total;
  }
  return total + block_;
}

double pairwise_sum(std::span<const double> values) noexcept {
  constexpr std::size_t kLeaf = 16;
  if (values.size() <= kLeaf) {
    double s = 0.0;
    for (double v : values) s += v;
    return s;
  }
  const std::size_t half = values.size() / 2;
  return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

double pairwise_mean(std::span<const double> values) noexcept {
  if (values.empty()) return 0.0;
  return pairwise_sum(values) / static_cast<double>(values.size());
}

}  // namespace uninorm
