#include "uninorm/boxnorms.hpp"

#include "cube.hpp"
#include "parallel.hpp"
#include "uninorm/error.hpp"
#include "uninorm/random.hpp"
#include "uninorm/summation.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <string>

namespace uninorm {

namespace {

using detail::sign_of;

std::uint64_t pow_u(std::int64_t base, std::int64_t exp) {
  return checked_pow(static_cast<std::uint64_t>(base), static_cast<std::uint64_t>(exp));
}

double int_pow(double x, int k) {
  double r = 1.0;
  for (int i = 0; i < k; ++i) r *= x;
  return r;
}

void require_ell(int ell) {
  if (ell < 2 || ell % 2 != 0) {
    throw Error(ErrorKind::invalid_parameter, "ell must be an even integer >= 2, got " + std::to_string(ell));
  }
}

/// Sum over x' in V^{(s-1) ell} of prod_j K_j(x'), folding the last
/// coordinate. With `uniform`, fs holds one tensor and the summand is K^ell.
double contract(std::span<const double* const> fs, std::int64_t V, int s, int ell, bool uniform) {
  const int digits = (s - 1) * ell;
  const auto Q = static_cast<std::size_t>(pow_u(ell, s - 1));
  const int outer_digits = std::min(digits, 2);
  const auto outer = static_cast<std::int64_t>(pow_u(V, outer_digits));

  // prefix_digit[q * (s-1) + i] = which copy of row i vertex q uses.
  std::vector<int> copy_of(Q * static_cast<std::size_t>(std::max(s - 1, 1)));
  std::vector<std::int64_t> row_stride(static_cast<std::size_t>(std::max(s - 1, 1)));
  for (int i = 0; i < s - 1; ++i) row_stride[static_cast<std::size_t>(i)] = static_cast<std::int64_t>(pow_u(V, s - 2 - i));
  for (std::size_t q = 0; q < Q; ++q) {
    std::size_t rest = q;
    for (int i = 0; i < s - 1; ++i) {
      copy_of[q * static_cast<std::size_t>(s - 1) + static_cast<std::size_t>(i)] = static_cast<int>(rest % static_cast<std::size_t>(ell));
      rest /= static_cast<std::size_t>(ell);
    }
  }

  return detail::parallel_sum(outer, [&](std::int64_t chunk) {
    std::vector<std::int64_t> x(static_cast<std::size_t>(digits), 0);
    {
      std::int64_t c = chunk;
      for (int d = outer_digits; d-- > 0;) {
        x[static_cast<std::size_t>(d)] = c % V;
        c /= V;
      }
    }
    std::vector<std::int64_t> inner(static_cast<std::size_t>(digits - outer_digits), 0);
    std::vector<std::int64_t> base(Q);
    PairwiseAccumulator acc;
    do {
      std::copy(inner.begin(), inner.end(), x.begin() + outer_digits);
      for (std::size_t q = 0; q < Q; ++q) {
        std::int64_t p = 0;
        for (int i = 0; i < s - 1; ++i) {
          const int copy = copy_of[q * static_cast<std::size_t>(s - 1) + static_cast<std::size_t>(i)];
          p += x[static_cast<std::size_t>(i * ell + copy)] * row_stride[static_cast<std::size_t>(i)];
        }
        base[q] = p * V;
      }
      double term = 1.0;
      const int columns = uniform ? 1 : ell;
      for (int j = 0; j < columns && term != 0.0; ++j) {
        double k = 0.0;
        for (std::int64_t b = 0; b < V; ++b) {
          double prod = 1.0;
          for (std::size_t q = 0; q < Q; ++q) {
            const double* F = uniform ? fs[0] : fs[q + static_cast<std::size_t>(j) * Q];
            prod *= F[base[q] + b];
          }
          k += prod;
        }
        k /= static_cast<double>(V);
        term *= uniform ? int_pow(k, ell) : k;
      }
      acc.add(term);
    } while (detail::next_tuple(inner, V));
    return acc.sum();
  }) / static_cast<double>(pow_u(V, digits));
}

std::uint64_t contraction_cost(std::int64_t V, int s, int ell) {
  return pow_u(V, static_cast<std::int64_t>(s - 1) * ell + 1) * pow_u(ell, s - 1);
}

}  // namespace

TensorFunction lift_to_tensor(const GroupFunction& f, int s, const Budget& budget) {
  if (s < 2) throw Error(ErrorKind::invalid_parameter, "s must be >= 2");
  const auto& g = f.group();
  const std::int64_t n = g.order();
  const std::uint64_t size = pow_u(n, s);
  if (size > budget.enumeration) {
    throw Error(ErrorKind::budget_exceeded, "lifted tensor needs " + std::to_string(size) + " entries");
  }
  std::vector<std::int64_t> sums(static_cast<std::size_t>(n));
  for (std::int64_t a = 0; a < n; ++a) sums[static_cast<std::size_t>(a)] = a;
  for (int level = 1; level < s; ++level) {
    std::vector<std::int64_t> next(sums.size() * static_cast<std::size_t>(n));
    for (std::size_t p = 0; p < sums.size(); ++p) {
      for (std::int64_t l = 0; l < n; ++l) next[p * static_cast<std::size_t>(n) + static_cast<std::size_t>(l)] = g.add(sums[p], l);
    }
    sums = std::move(next);
  }
  std::vector<double> values(sums.size());
  for (std::size_t i = 0; i < sums.size(); ++i) values[i] = f[sums[i]];
  return TensorFunction(n, s, std::move(values));
}

NormResult box_norm_ell(const TensorFunction& F, int ell, const Budget& budget) {
  require_ell(ell);
  const int s = F.arity();
  const std::int64_t V = F.vertex_count();
  const std::uint64_t cost = contraction_cost(V, s, ell);
  if (cost > budget.enumeration) {
    throw Error(ErrorKind::budget_exceeded, "box-norm contraction needs " + std::to_string(cost) + " operations");
  }
  const double* data = F.values().data();
  const double avg = contract(std::span<const double* const>(&data, 1), V, s, ell, true);
  const double power = std::pow(static_cast<double>(ell), s);
  return {detail::root_of_cube_average(avg, power, std::pow(F.max_abs(), power)), NormMethod::tensor_contraction,
          cost};
}

NormResult box_norm(const TensorFunction& F, const Budget& budget) { return box_norm_ell(F, 2, budget); }

double multi_box_correlation(std::span<const TensorFunction> Fs, int ell, const Budget& budget) {
  require_ell(ell);
  if (Fs.empty()) throw Error(ErrorKind::invalid_input, "empty tensor family");
  const int s = Fs.front().arity();
  const std::int64_t V = Fs.front().vertex_count();
  if (Fs.size() != pow_u(ell, s)) {
    throw Error(ErrorKind::invalid_input, "expected ell^s = " + std::to_string(pow_u(ell, s)) + " tensors");
  }
  std::vector<const double*> ptrs;
  for (const auto& F : Fs) {
    if (!F.same_shape(Fs.front())) throw Error(ErrorKind::invalid_input, "tensor shape mismatch");
    ptrs.push_back(F.values().data());
  }
  const std::uint64_t cost = contraction_cost(V, s, ell) * static_cast<std::uint64_t>(ell);
  if (cost > budget.enumeration) {
    throw Error(ErrorKind::budget_exceeded, "correlation contraction needs " + std::to_string(cost) + " operations");
  }
  return contract(ptrs, V, s, ell, false);
}

double cut_objective(const TensorFunction& F, const DualFamily& family) {
  if (family.arity() != F.arity() || family.vertex_count() != F.vertex_count()) {
    throw Error(ErrorKind::invalid_input, "family does not match tensor shape");
  }
  std::vector<TensorFunction> fs;
  fs.reserve(family.members().size() + 1);
  fs.push_back(F);
  fs.insert(fs.end(), family.members().begin(), family.members().end());
  return multi_box_correlation(fs, 2);
}

// ---------------------------------------------------------------------------
// Cut norm search over factored families.

namespace {

struct FactorLayout {
  std::int64_t V;
  int s;
  std::size_t size;         // V^s
  std::size_t factor_size;  // V^{s-1}
  std::vector<std::size_t> strides;  // V^{s-1-i}

  FactorLayout(std::int64_t vertices, int arity)
      : V(vertices),
        s(arity),
        size(static_cast<std::size_t>(pow_u(vertices, arity))),
        factor_size(static_cast<std::size_t>(pow_u(vertices, arity - 1))),
        strides(static_cast<std::size_t>(arity)) {
    for (int i = 0; i < s; ++i) strides[static_cast<std::size_t>(i)] = static_cast<std::size_t>(pow_u(V, s - 1 - i));
  }

  std::size_t drop(std::size_t flat, int i) const {
    const std::size_t st = strides[static_cast<std::size_t>(i)];
    return (flat / (st * static_cast<std::size_t>(V))) * st + flat % st;
  }

  std::size_t insert(std::size_t w, int i, std::size_t ui) const {
    const std::size_t st = strides[static_cast<std::size_t>(i)];
    return ((w / st) * static_cast<std::size_t>(V) + ui) * st + w % st;
  }
};

struct CutSearch {
  const FactorLayout& layout;
  const double* F;
  /// drops[i][flat] = flat index with coordinate i removed.
  std::vector<std::vector<std::size_t>> drops;

  CutSearch(const FactorLayout& l, const double* values) : layout(l), F(values) {
    drops.resize(static_cast<std::size_t>(l.s));
    for (int i = 0; i < l.s; ++i) {
      auto& d = drops[static_cast<std::size_t>(i)];
      d.resize(l.size);
      for (std::size_t flat = 0; flat < l.size; ++flat) d[flat] = l.drop(flat, i);
    }
  }

  /// M_i(w) = E_{u_i} F(u) prod_{j != i} G_j(u_{-j}); g holds all factors
  /// back to back.
  void marginal(std::span<const double> g, int i, std::span<double> out) const {
    const std::size_t W = layout.factor_size;
    const auto V = static_cast<std::size_t>(layout.V);
    for (std::size_t w = 0; w < W; ++w) {
      double acc = 0.0;
      for (std::size_t ui = 0; ui < V; ++ui) {
        const std::size_t flat = layout.insert(w, i, ui);
        double prod = F[flat];
        for (int j = 0; j < layout.s; ++j) {
          if (j == i) continue;
          prod *= g[static_cast<std::size_t>(j) * W + drops[static_cast<std::size_t>(j)][flat]];
        }
        acc += prod;
      }
      out[w] = acc / static_cast<double>(V);
    }
  }
};

std::vector<TensorFunction> unpack_factors(const FactorLayout& layout, std::span<const double> g) {
  std::vector<TensorFunction> out;
  for (int i = 0; i < layout.s; ++i) {
    const auto begin = g.begin() + static_cast<std::ptrdiff_t>(static_cast<std::size_t>(i) * layout.factor_size);
    out.emplace_back(layout.V, layout.s - 1,
                     std::vector<double>(begin, begin + static_cast<std::ptrdiff_t>(layout.factor_size)));
  }
  return out;
}

void require_factors(std::span<const TensorFunction> factors) {
  if (factors.size() < 2) throw Error(ErrorKind::invalid_input, "need at least two factors");
  const auto s = static_cast<int>(factors.size());
  for (const auto& G : factors) {
    if (G.arity() != s - 1 || G.vertex_count() != factors.front().vertex_count()) {
      throw Error(ErrorKind::invalid_input, "factor shape mismatch");
    }
  }
}

}  // namespace

WeakNormEstimate cut_norm(const TensorFunction& F, const SearchOptions& options) {
  const int s = F.arity();
  if (s < 2) throw Error(ErrorKind::invalid_parameter, "cut norm needs arity >= 2");
  const FactorLayout layout(F.vertex_count(), s);
  const CutSearch search(layout, F.values().data());
  const std::size_t W = layout.factor_size;
  const std::size_t total = W * static_cast<std::size_t>(s);

  std::vector<double> best_g;
  std::uint64_t evaluations = 0;
  bool exact = false;

  if (options.mode == SearchMode::exhaustive) {
    // G_{s-1} is solved in closed form; the rest are enumerated.
    const std::uint64_t free_bits = static_cast<std::uint64_t>(W) * static_cast<std::uint64_t>(s - 1);
    if (free_bits > 62 || checked_pow(2, free_bits) > options.budget.exhaustive) {
      throw Error(ErrorKind::budget_exceeded,
                  "exhaustive cut-norm search needs 2^" + std::to_string(free_bits) + " sign patterns");
    }
    const auto patterns = static_cast<std::int64_t>(std::uint64_t{1} << free_bits);
    std::vector<double> values(static_cast<std::size_t>(patterns));
#pragma omp parallel
    {
      std::vector<double> g(total, 1.0);
      std::vector<double> m(W);
#pragma omp for schedule(static)
      for (std::int64_t p = 0; p < patterns; ++p) {
        for (std::uint64_t b = 0; b < free_bits; ++b) g[b] = ((p >> b) & 1) != 0 ? -1.0 : 1.0;
        search.marginal(g, s - 1, m);
        for (auto& v : m) v = std::abs(v);
        values[static_cast<std::size_t>(p)] = pairwise_mean(m);
      }
    }
    const auto best = std::max_element(values.begin(), values.end()) - values.begin();
    best_g.assign(total, 1.0);
    for (std::uint64_t b = 0; b < free_bits; ++b) best_g[b] = ((best >> b) & 1) != 0 ? -1.0 : 1.0;
    std::vector<double> m(W);
    search.marginal(best_g, s - 1, m);
    for (std::size_t w = 0; w < W; ++w) best_g[static_cast<std::size_t>(s - 1) * W + w] = sign_of(m[w]);
    evaluations = static_cast<std::uint64_t>(patterns);
    exact = true;
  } else {
    const int restarts = std::max(1, options.restarts);
    std::vector<std::vector<double>> found(static_cast<std::size_t>(restarts));
    std::vector<double> objective(static_cast<std::size_t>(restarts));
    std::vector<std::uint64_t> sweeps(static_cast<std::size_t>(restarts));
#pragma omp parallel for schedule(dynamic, 1)
    for (int r = 0; r < restarts; ++r) {
      Rng rng(derive_seed(options.seed, static_cast<std::uint64_t>(r)));
      std::vector<double> g = rng.signs(total);
      std::vector<double> m(W);
      double value = -1.0;
      std::uint64_t count = 0;
      for (int sweep = 0; sweep < options.max_sweeps; ++sweep) {
        double after = value;
        for (int i = 0; i < s; ++i) {
          search.marginal(g, i, m);
          double* gi = g.data() + static_cast<std::size_t>(i) * W;
          for (std::size_t w = 0; w < W; ++w) {
            gi[w] = sign_of(m[w]);
            m[w] = std::abs(m[w]);
          }
          after = pairwise_mean(m);
        }
        ++count;
        const bool stalled = after - value < options.tolerance;
        value = after;
        if (stalled) break;
      }
      found[static_cast<std::size_t>(r)] = std::move(g);
      objective[static_cast<std::size_t>(r)] = value;
      sweeps[static_cast<std::size_t>(r)] = count;
    }
    const auto best = std::max_element(objective.begin(), objective.end()) - objective.begin();
    best_g = std::move(found[static_cast<std::size_t>(best)]);
    for (auto c : sweeps) evaluations += c;
  }

  auto factors = unpack_factors(layout, best_g);
  const double value = factored_objective(F, factors);
  return WeakNormEstimate{.lower_bound = value,
                          .witness = family_from_factors(factors),
                          .exact = exact,
                          .group_members = {},
                          .factors = std::move(factors),
                          .evaluations = evaluations};
}

TensorFunction factor_product(std::span<const TensorFunction> factors) {
  require_factors(factors);
  const auto s = static_cast<int>(factors.size());
  const FactorLayout layout(factors.front().vertex_count(), s);
  std::vector<double> values(layout.size);
  for (std::size_t flat = 0; flat < layout.size; ++flat) {
    double prod = 1.0;
    for (int i = 0; i < s; ++i) prod *= factors[static_cast<std::size_t>(i)][layout.drop(flat, i)];
    values[flat] = prod;
  }
  return TensorFunction(layout.V, s, std::move(values));
}

double factored_objective(const TensorFunction& F, std::span<const TensorFunction> factors) {
  const auto K = factor_product(factors);
  if (!K.same_shape(F)) throw Error(ErrorKind::invalid_input, "factors do not match tensor shape");
  return average(F * K);
}

DualFamily family_from_factors(std::span<const TensorFunction> factors) {
  require_factors(factors);
  const auto s = static_cast<int>(factors.size());
  const FactorLayout layout(factors.front().vertex_count(), s);
  std::vector<TensorFunction> members;
  const unsigned count = (1U << s) - 1;
  for (unsigned m = 1; m <= count; ++m) {
    if (std::has_single_bit(m)) {
      const int i = std::countr_zero(m);
      std::vector<double> values(layout.size);
      for (std::size_t flat = 0; flat < layout.size; ++flat) {
        values[flat] = factors[static_cast<std::size_t>(i)][layout.drop(flat, i)];
      }
      members.emplace_back(layout.V, s, std::move(values));
    } else {
      members.push_back(TensorFunction::constant(layout.V, s, 1.0));
    }
  }
  return DualFamily(s, std::move(members));
}

TensorFunction cut_dual_kernel(const DualFamily& family) {
  const int s = family.arity();
  const std::int64_t V = family.vertex_count();
  const auto uV = static_cast<std::size_t>(V);
  const FactorLayout layout(V, s);
  std::vector<double> K(layout.size);

  if (s == 2) {
    // K = H_2 * (H_3^T H_1) / V^2 with H_1(y0,u1), H_2(u0,y1), H_3(y0,y1).
    const auto h1 = family.member(1).values();
    const auto h2 = family.member(2).values();
    const auto h3 = family.member(3).values();
    std::vector<double> P(uV * uV, 0.0);
    for (std::size_t y1 = 0; y1 < uV; ++y1) {
      for (std::size_t y0 = 0; y0 < uV; ++y0) {
        const double c = h3[y0 * uV + y1];
        if (c == 0.0) continue;
        for (std::size_t u1 = 0; u1 < uV; ++u1) P[y1 * uV + u1] += c * h1[y0 * uV + u1];
      }
    }
    const double scale = 1.0 / static_cast<double>(uV * uV);
    for (std::size_t u0 = 0; u0 < uV; ++u0) {
      for (std::size_t u1 = 0; u1 < uV; ++u1) {
        double acc = 0.0;
        for (std::size_t y1 = 0; y1 < uV; ++y1) acc += h2[u0 * uV + y1] * P[y1 * uV + u1];
        K[u0 * uV + u1] = acc * scale;
      }
    }
    return TensorFunction(V, s, std::move(K));
  }

  const unsigned count = (1U << s) - 1;
  detail::parallel_fill(K, [&](std::int64_t u) {
    std::vector<std::size_t> uc(static_cast<std::size_t>(s));
    std::vector<std::size_t> yc(static_cast<std::size_t>(s));
    for (int i = 0; i < s; ++i) {
      const std::size_t st = layout.strides[static_cast<std::size_t>(i)];
      uc[static_cast<std::size_t>(i)] = (static_cast<std::size_t>(u) / st) % uV * st;
    }
    PairwiseAccumulator acc;
    for (std::size_t y = 0; y < layout.size; ++y) {
      for (int i = 0; i < s; ++i) {
        const std::size_t st = layout.strides[static_cast<std::size_t>(i)];
        yc[static_cast<std::size_t>(i)] = (y / st) % uV * st;
      }
      double prod = 1.0;
      for (unsigned m = 1; m <= count && prod != 0.0; ++m) {
        std::size_t flat = 0;
        for (int i = 0; i < s; ++i) flat += ((m >> i) & 1U) != 0 ? yc[static_cast<std::size_t>(i)] : uc[static_cast<std::size_t>(i)];
        prod *= family.member(m)[flat];
      }
      acc.add(prod);
    }
    return acc.sum() / static_cast<double>(layout.size);
  });
  return TensorFunction(V, s, std::move(K));
}

}  // namespace uninorm
