#include "uninorm/fourier.hpp"

#include <cmath>
#include <numbers>

namespace uninorm {

namespace {

constexpr std::size_t kDirectLimit = 32;

bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

Complex unit_root(std::size_t k, std::size_t n) {
  // e^{-2 pi i k / n} with k already reduced mod n.
  const double angle = -2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n);
  return {std::cos(angle), std::sin(angle)};
}

std::vector<std::size_t> bit_reversal(std::size_t n) {
  std::vector<std::size_t> rev(n, 0);
  std::size_t bits = 0;
  while ((std::size_t{1} << bits) < n) ++bits;
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t r = 0;
    for (std::size_t b = 0; b < bits; ++b) {
      if (i & (std::size_t{1} << b)) r |= std::size_t{1} << (bits - 1 - b);
    }
    rev[i] = r;
  }
  return rev;
}

void radix2_transform(std::span<Complex> data, std::span<const Complex> twiddles,
                      std::span<const std::size_t> rev, bool inverse) {
  const std::size_t n = data.size();
  for (std::size_t i = 0; i < n; ++i) {
    if (i < rev[i]) std::swap(data[i], data[rev[i]]);
  }
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const std::size_t step = n / len;
    const std::size_t half = len / 2;
    for (std::size_t start = 0; start < n; start += len) {
      for (std::size_t k = 0; k < half; ++k) {
        Complex w = twiddles[k * step];
        if (inverse) w = std::conj(w);
        const Complex u = data[start + k];
        const Complex v = data[start + k + half] * w;
        data[start + k] = u + v;
        data[start + k + half] = u - v;
      }
    }
  }
}

}  // namespace

DftPlan::DftPlan(std::size_t n) : n_(n) {
  if (n_ <= 1) {
    kind_ = Kind::trivial;
    return;
  }
  if (is_power_of_two(n_)) {
    kind_ = Kind::radix2;
    twiddles_.resize(n_ / 2);
    for (std::size_t k = 0; k < n_ / 2; ++k) twiddles_[k] = unit_root(k, n_);
    bit_reverse_ = bit_reversal(n_);
    return;
  }
  if (n_ <= kDirectLimit) {
    kind_ = Kind::direct;
    twiddles_.resize(n_);
    for (std::size_t k = 0; k < n_; ++k) twiddles_[k] = unit_root(k, n_);
    return;
  }
  kind_ = Kind::bluestein;
  m_ = 1;
  while (m_ < 2 * n_ - 1) m_ <<= 1;
  chirp_.resize(n_);
  for (std::size_t k = 0; k < n_; ++k) {
    // e^{-pi i k^2 / n} = e^{-2 pi i (k^2 mod 2n) / 2n}
    const std::size_t k2 = (k * k) % (2 * n_);
    chirp_[k] = unit_root(k2, 2 * n_);
  }
  m_twiddles_.resize(m_ / 2);
  for (std::size_t k = 0; k < m_ / 2; ++k) m_twiddles_[k] = unit_root(k, m_);
  m_bit_reverse_ = bit_reversal(m_);
  chirp_filter_fft_.assign(m_, Complex{});
  chirp_filter_fft_[0] = std::conj(chirp_[0]);
  for (std::size_t k = 1; k < n_; ++k) {
    chirp_filter_fft_[k] = std::conj(chirp_[k]);
    chirp_filter_fft_[m_ - k] = std::conj(chirp_[k]);
  }
  radix2_transform(chirp_filter_fft_, m_twiddles_, m_bit_reverse_, false);
}

void DftPlan::forward(std::span<Complex> data) const {
  switch (kind_) {
    case Kind::trivial: return;
    case Kind::radix2: radix2(data, false); return;
    case Kind::direct: direct(data); return;
    case Kind::bluestein: bluestein(data); return;
  }
}

void DftPlan::radix2(std::span<Complex> data, bool inverse) const {
  radix2_transform(data, twiddles_, bit_reverse_, inverse);
}

void DftPlan::direct(std::span<Complex> data) const {
  std::vector<Complex> out(n_);
  for (std::size_t k = 0; k < n_; ++k) {
    Complex acc{};
    std::size_t idx = 0;
    for (std::size_t j = 0; j < n_; ++j) {
      acc += data[j] * twiddles_[idx];
      idx += k;
      if (idx >= n_) idx -= n_;
    }
    out[k] = acc;
  }
  std::copy(out.begin(), out.end(), data.begin());
}

void DftPlan::bluestein(std::span<Complex> data) const {
  std::vector<Complex> a(m_, Complex{});
  for (std::size_t k = 0; k < n_; ++k) a[k] = data[k] * chirp_[k];
  radix2_transform(a, m_twiddles_, m_bit_reverse_, false);
  for (std::size_t k = 0; k < m_; ++k) a[k] *= chirp_filter_fft_[k];
  radix2_transform(a, m_twiddles_, m_bit_reverse_, true);
  const double scale = 1.0 / static_cast<double>(m_);
  for (std::size_t k = 0; k < n_; ++k) data[k] = a[k] * scale * chirp_[k];
}

GroupDft::GroupDft(const FiniteAbelianGroup& group) : group_(group) {
  for (std::int64_t n : group_.factors()) plans_.emplace_back(static_cast<std::size_t>(n));
}

std::vector<Complex> GroupDft::transform(std::span<const double> values) const {
  const auto order = static_cast<std::size_t>(group_.order());
  std::vector<Complex> data(values.begin(), values.end());
  const auto factors = group_.factors();
  std::size_t stride = order;
  std::vector<Complex> line;
  for (std::size_t axis = 0; axis < factors.size(); ++axis) {
    const auto n = static_cast<std::size_t>(factors[axis]);
    stride /= n;  // stride of this axis
    if (n == 1) continue;
    line.resize(n);
    const std::size_t block = stride * n;
    for (std::size_t outer = 0; outer < order; outer += block) {
      for (std::size_t inner = 0; inner < stride; ++inner) {
        const std::size_t base = outer + inner;
        for (std::size_t j = 0; j < n; ++j) line[j] = data[base + j * stride];
        plans_[axis].forward(line);
        for (std::size_t j = 0; j < n; ++j) data[base + j * stride] = line[j];
      }
    }
  }
  const double scale = 1.0 / static_cast<double>(order);
  for (auto& c : data) c *= scale;
  return data;
}

std::vector<Complex> fourier_coefficients(const GroupFunction& f) {
  return GroupDft(f.group()).transform(f.values());
}

}  // namespace uninorm
