#pragma once

#include <array>
#include <cstddef>
#include <span>

namespace uninorm {

/// Streaming pairwise (cascade) summation.
///
/// Values are first folded into fixed-size blocks; completed blocks are
/// merged like a binary counter so that every partial sum combines two
/// operands of equal weight. The result depends only on the order of the
/// added values, never on threading.
class PairwiseAccumulator {
 public:
  void add(double value) noexcept {
    block_ += value;
    if (++in_block_ == kBlock) flush_block();
  }

  double sum() const noexcept;
  std::size_t count() const noexcept { return count_ * kBlock + in_block_; }

 private:
  static constexpr std::size_t kBlock = 16;
  static constexpr std::size_t kLevels = 64;

  void flush_block() noexcept;

  double block_ = 0.0;
  std::size_t in_block_ = 0;
  std::size_t count_ = 0;  // completed blocks
  std::array<double, kLevels> levels_{};
};

/// Recursive pairwise sum of a contiguous range.
double pairwise_sum(std::span<const double> values) noexcept;

/// Pairwise average; returns 0 for an empty range.
double pairwise_mean(std::span<const double> values) noexcept;

}  // namespace uninorm
