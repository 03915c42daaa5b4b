#pragma once

#include "uninorm/group.hpp"

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace uninorm {

using Complex = std::complex<double>;

/// Forward DFT plan of a fixed length: out[k] = sum_j in[j] e^{-2 pi i jk/n}.
///
/// Powers of two use an iterative radix-2 transform, short lengths a direct
/// O(n^2) sum, and everything else Bluestein's chirp-z reduction to a
/// power-of-two convolution. Plans are immutable and safe to share.
class DftPlan {
 public:
  explicit DftPlan(std::size_t n);

  std::size_t size() const noexcept { return n_; }

  /// In-place forward transform (unnormalized).
  void forward(std::span<Complex> data) const;

 private:
  enum class Kind { trivial, radix2, direct, bluestein };

  void radix2(std::span<Complex> data, bool inverse) const;
  void direct(std::span<Complex> data) const;
  void bluestein(std::span<Complex> data) const;

  std::size_t n_;
  Kind kind_;
  std::vector<Complex> twiddles_;            // e^{-2 pi i k / n} (direct/radix2)
  std::vector<std::size_t> bit_reverse_;     // radix2 permutation
  std::size_t m_ = 0;                        // bluestein convolution length
  std::vector<Complex> chirp_;               // e^{-pi i k^2 / n}
  std::vector<Complex> chirp_filter_fft_;    // FFT of conj chirp, length m
  std::vector<Complex> m_twiddles_;
  std::vector<std::size_t> m_bit_reverse_;
};

/// Multi-dimensional DFT on a product of cyclic groups, one plan per factor.
class GroupDft {
 public:
  explicit GroupDft(const FiniteAbelianGroup& group);

  /// Fourier coefficients hat f(xi) = E_x f(x) e(-x . xi), indexed by the
  /// same mixed-radix code as the group elements.
  std::vector<Complex> transform(std::span<const double> values) const;

  const FiniteAbelianGroup& group() const noexcept { return group_; }

 private:
  FiniteAbelianGroup group_;
  std::vector<DftPlan> plans_;
};

std::vector<Complex> fourier_coefficients(const GroupFunction& f);

}  // namespace uninorm
