#include "uninorm/reference.hpp"

#include "uninorm/error.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace uninorm::reference {

namespace {

bool advance(std::vector<std::int64_t>& digits, std::int64_t base) {
  for (std::size_t i = digits.size(); i-- > 0;) {
    if (++digits[i] < base) return true;
    digits[i] = 0;
  }
  return false;
}

std::int64_t ipow(std::int64_t b, int e) {
  std::int64_t r = 1;
  for (int i = 0; i < e; ++i) r *= b;
  return r;
}

/// Flat index of pi_omega(x) where x is stored row-major as x[i * ell + j]
/// and omega has base-ell digits (0-based) given by `code`.
std::size_t project(std::span<const std::int64_t> x, int s, int ell, std::int64_t V, std::int64_t code) {
  std::size_t flat = 0;
  for (int i = 0; i < s; ++i) {
    const auto j = static_cast<std::size_t>(code % ell);
    code /= ell;
    flat = flat * static_cast<std::size_t>(V) + static_cast<std::size_t>(x[static_cast<std::size_t>(i * ell) + j]);
  }
  return flat;
}

}  // namespace

double gowers_power(const GroupFunction& f, int s) {
  const auto& g = f.group();
  const std::int64_t n = g.order();
  std::vector<std::int64_t> xh(static_cast<std::size_t>(s + 1), 0);
  double total = 0.0;
  std::int64_t terms = 0;
  do {
    double prod = 1.0;
    for (std::int64_t m = 0; m < (std::int64_t{1} << s); ++m) {
      Element y = xh[0];
      for (int i = 0; i < s; ++i) {
        if ((m >> i) & 1) y = group_add(g, y, xh[static_cast<std::size_t>(i + 1)]);
      }
      prod *= f[y];
    }
    total += prod;
    ++terms;
  } while (advance(xh, n));
  return total / static_cast<double>(terms);
}

double box_correlation(std::span<const TensorFunction> Fs, int ell) {
  const int s = Fs.front().arity();
  const std::int64_t V = Fs.front().vertex_count();
  const std::int64_t vertices = ipow(ell, s);
  if (static_cast<std::int64_t>(Fs.size()) != vertices) throw Error(ErrorKind::invalid_input, "family size");
  std::vector<std::int64_t> x(static_cast<std::size_t>(s * ell), 0);
  double total = 0.0;
  std::int64_t terms = 0;
  do {
    double prod = 1.0;
    for (std::int64_t code = 0; code < vertices; ++code) {
      prod *= Fs[static_cast<std::size_t>(code)][project(x, s, ell, V, code)];
    }
    total += prod;
    ++terms;
  } while (advance(x, V));
  return total / static_cast<double>(terms);
}

double box_power(const TensorFunction& F, int ell) {
  std::vector<TensorFunction> Fs(static_cast<std::size_t>(ipow(ell, F.arity())), F);
  return box_correlation(Fs, ell);
}

std::vector<double> cube_marginal(std::span<const GroupFunction> fs) {
  const auto& g = fs.front().group();
  const std::int64_t n = g.order();
  int s = 0;
  while ((std::size_t{1} << s) < fs.size() + 1) ++s;
  std::vector<double> out(static_cast<std::size_t>(n));
  for (std::int64_t x = 0; x < n; ++x) {
    std::vector<std::int64_t> h(static_cast<std::size_t>(s), 0);
    double total = 0.0;
    std::int64_t terms = 0;
    do {
      double prod = 1.0;
      for (std::size_t m = 1; m <= fs.size(); ++m) {
        Element y = x;
        for (int i = 0; i < s; ++i) {
          if ((m >> i) & 1U) y = group_add(g, y, h[static_cast<std::size_t>(i)]);
        }
        prod *= fs[m - 1][y];
      }
      total += prod;
      ++terms;
    } while (advance(h, n));
    out[static_cast<std::size_t>(x)] = total / static_cast<double>(terms);
  }
  return out;
}

double weak_norm(const GroupFunction& f, int s) {
  const auto& g = f.group();
  const std::int64_t n = g.order();
  const std::size_t members = (std::size_t{1} << s) - 1;
  const std::size_t bits = members * static_cast<std::size_t>(n);
  if (bits > 26) throw Error(ErrorKind::budget_exceeded, "reference weak norm too large");
  double best = -1.0;
  for (std::uint64_t p = 0; p < (std::uint64_t{1} << bits); ++p) {
    std::vector<GroupFunction> fs;
    fs.reserve(members);
    for (std::size_t m = 0; m < members; ++m) {
      std::vector<double> v(static_cast<std::size_t>(n));
      for (std::int64_t x = 0; x < n; ++x) {
        v[static_cast<std::size_t>(x)] = ((p >> (m * static_cast<std::size_t>(n) + static_cast<std::size_t>(x))) & 1U) ? -1.0 : 1.0;
      }
      fs.emplace_back(g, std::move(v));
    }
    const auto marginal = cube_marginal(fs);
    double total = 0.0;
    for (std::int64_t x = 0; x < n; ++x) total += f[x] * marginal[static_cast<std::size_t>(x)];
    best = std::max(best, total / static_cast<double>(n));
  }
  return best;
}

double cut_norm(const TensorFunction& F) {
  const int s = F.arity();
  const std::int64_t V = F.vertex_count();
  const std::size_t members = (std::size_t{1} << s) - 1;
  const std::size_t size = F.size();
  const std::size_t bits = members * size;
  if (bits > 26) throw Error(ErrorKind::budget_exceeded, "reference cut norm too large");
  double best = -1.0;
  for (std::uint64_t p = 0; p < (std::uint64_t{1} << bits); ++p) {
    std::vector<TensorFunction> Fs{F};
    for (std::size_t m = 0; m < members; ++m) {
      std::vector<double> v(size);
      for (std::size_t i = 0; i < size; ++i) v[i] = ((p >> (m * size + i)) & 1U) ? -1.0 : 1.0;
      Fs.emplace_back(V, s, std::move(v));
    }
    best = std::max(best, box_correlation(Fs, 2));
  }
  return best;
}

std::vector<double> realize_dual(const DualFamily& family, const FiniteAbelianGroup& group) {
  const int s = family.arity();
  const std::int64_t n = group.order();
  if (family.vertex_count() != n) throw Error(ErrorKind::invalid_input, "family vertex count");
  std::vector<double> total(static_cast<std::size_t>(n), 0.0);
  std::vector<std::int64_t> count(static_cast<std::size_t>(n), 0);
  std::vector<std::int64_t> x(static_cast<std::size_t>(2 * s), 0);
  do {
    Element z = 0;
    for (int i = 0; i < s; ++i) z = group_add(group, z, x[static_cast<std::size_t>(2 * i)]);
    double prod = 1.0;
    for (unsigned m = 1; m < (1U << s); ++m) prod *= family.member(m)[project(x, s, 2, n, m)];
    total[static_cast<std::size_t>(z)] += prod;
    ++count[static_cast<std::size_t>(z)];
  } while (advance(x, n));
  for (std::size_t z = 0; z < total.size(); ++z) total[z] /= static_cast<double>(count[z]);
  return total;
}

std::vector<std::complex<double>> fourier(const GroupFunction& f) {
  const auto& g = f.group();
  const std::int64_t n = g.order();
  std::vector<std::complex<double>> out(static_cast<std::size_t>(n));
  for (std::int64_t xi = 0; xi < n; ++xi) {
    const auto dxi = g.decode(xi);
    std::complex<double> acc{};
    for (std::int64_t x = 0; x < n; ++x) {
      const auto dx = g.decode(x);
      double phase = 0.0;
      for (std::size_t i = 0; i < dx.size(); ++i) {
        phase += static_cast<double>((dx[i] * dxi[i]) % g.factors()[i]) / static_cast<double>(g.factors()[i]);
      }
      acc += f[x] * std::polar(1.0, -2.0 * std::numbers::pi * phase);
    }
    out[static_cast<std::size_t>(xi)] = acc / static_cast<double>(n);
  }
  return out;
}

}  // namespace uninorm::reference
