#include "uninorm/decompose.hpp"

#include "uninorm/boxnorms.hpp"
#include "uninorm/dualsearch.hpp"
#include "uninorm/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace uninorm {

namespace {

struct OracleAnswer {
  std::vector<double> dual;
  double correlation;
  bool exact;
};

template <class Function>
Function with_values(const Function& like, std::vector<double> values);

template <>
GroupFunction with_values(const GroupFunction& like, std::vector<double> values) {
  return GroupFunction(like.group(), std::move(values));
}

template <>
TensorFunction with_values(const TensorFunction& like, std::vector<double> values) {
  return TensorFunction(like.vertex_count(), like.arity(), std::move(values));
}

double mean_of(std::span<const double> v) {
  double total = 0.0;
  for (double x : v) total += x;
  return total / static_cast<double>(v.size());
}

void require_epsilon(double epsilon) {
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) throw Error(ErrorKind::invalid_parameter, "epsilon must be > 0");
}

void require_dominated(std::span<const double> g, std::span<const double> nu, bool signed_input) {
  if (g.size() != nu.size()) throw Error(ErrorKind::invalid_input, "input and majorant differ in shape");
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double v = signed_input ? std::abs(g[i]) : g[i];
    if (v < 0.0 || v > nu[i] + 1e-12) {
      throw Error(ErrorKind::precondition_violation,
                  std::string(signed_input ? "|f| <= nu" : "0 <= g <= nu") + " fails at index " + std::to_string(i));
    }
  }
}

/// Lower bound on the dual gap of every [0,1]-valued model from one dual:
/// E[(g - w) D] >= E[gD] - E[D^+] and -E[(g - w) D] >= -E[gD] - E[D^-].
double gap_floor(std::span<const double> g, std::span<const double> d) {
  double gd = 0.0, pos = 0.0, neg = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    gd += g[i] * d[i];
    pos += std::max(d[i], 0.0);
    neg += std::max(-d[i], 0.0);
  }
  const double n = static_cast<double>(g.size());
  return std::max(gd / n - pos / n, -gd / n - neg / n);
}

template <class Function, class Oracle>
Decomposition<Function> run_dense_model(const Function& g, const Function& nu, double epsilon,
                                        const DecomposeOptions& options, Oracle&& oracle) {
  require_epsilon(epsilon);
  require_dominated(g.values(), nu.values(), false);
  const int tmax = options.max_iterations > 0 ? options.max_iterations
                                              : default_max_iterations(mean_of(nu.values()), epsilon);
  const auto gv = g.values();
  const std::size_t size = gv.size();

  std::vector<double> w(size);
  for (std::size_t i = 0; i < size; ++i) w[i] = std::clamp(gv[i], 0.0, 1.0);

  Decomposition<Function> result{.model = g};
  result.max_iterations = tmax;
  std::vector<double> best_w = w;
  double best_c = std::numeric_limits<double>::infinity();
  bool best_exact = false;
  std::vector<double> dual_sum(size, 0.0);
  double floor = 0.0;
  std::vector<double> residual(size);

  for (int t = 0; t < tmax; ++t) {
    for (std::size_t i = 0; i < size; ++i) residual[i] = gv[i] - w[i];
    OracleAnswer answer = oracle(with_values(g, residual));
    const double c = answer.correlation;

    for (std::size_t i = 0; i < size; ++i) dual_sum[i] += answer.dual[i];
    floor = std::max(floor, gap_floor(gv, answer.dual));
    std::vector<double> avg(size);
    for (std::size_t i = 0; i < size; ++i) avg[i] = dual_sum[i] / static_cast<double>(t + 1);
    floor = std::max(floor, gap_floor(gv, avg));

    ++result.iterations;
    if (c < best_c) {
      best_c = c;
      best_w = w;
      best_exact = answer.exact;
    }
    if (c <= epsilon) {
      result.trace.push_back({t, c, 0.0});
      result.converged = true;
      break;
    }
    const double step = c / 2.0;
    result.trace.push_back({t, c, step});
    for (std::size_t i = 0; i < size; ++i) w[i] = std::clamp(w[i] + step * answer.dual[i], 0.0, 1.0);
  }

  result.model = with_values(g, best_w);
  result.residual_cut = best_c;
  result.residual_cut_exact = best_exact;
  result.gap_lower_bound = floor;
  return result;
}

template <class Function>
std::vector<double> positive_part(const Function& f, double sign) {
  std::vector<double> v(f.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = std::max(sign * f.values()[i], 0.0);
  return v;
}

bool all_zero(std::span<const double> v) {
  return std::all_of(v.begin(), v.end(), [](double x) { return x == 0.0; });
}

/// Shared KvN split; `dense` runs one dense model, `gap` measures the
/// final dual gap and `norm` the strong residual.
template <class Function, class Dense, class Gap, class Norm>
Decomposition<Function> run_kvn(const Function& f, const Function& nu, double epsilon, const DecomposeOptions& options,
                                Dense&& dense, Gap&& gap, Norm&& norm) {
  require_epsilon(epsilon);
  require_dominated(f.values(), nu.values(), true);
  const auto plus = with_values(f, positive_part(f, 1.0));
  const auto minus = with_values(f, positive_part(f, -1.0));

  Decomposition<Function> result{.model = f};
  double bound = 0.0;
  bool bound_exact = true;
  bool converged = true;
  std::vector<double> h(f.size(), 0.0);
  for (int part = 0; part < 2; ++part) {
    const Function& piece = part == 0 ? plus : minus;
    if (all_zero(piece.values())) continue;
    auto run = dense(piece, nu);
    const double sign = part == 0 ? 1.0 : -1.0;
    for (std::size_t i = 0; i < h.size(); ++i) h[i] += sign * run.model.values()[i];
    bound += run.residual_cut;
    bound_exact = bound_exact && run.residual_cut_exact;
    converged = converged && run.converged;
    result.iterations += run.iterations;
    result.max_iterations = std::max(result.max_iterations, run.max_iterations);
    result.trace.insert(result.trace.end(), run.trace.begin(), run.trace.end());
  }
  result.model = with_values(f, h);
  result.converged = converged;
  result.residual_cut_bound = bound;

  const auto diff = f - result.model;
  const auto measured = gap(diff);
  result.residual_cut = measured.first;
  result.residual_cut_exact = measured.second && bound_exact;
  if (options.measure_residual_norm) {
    try {
      result.residual_norm = norm(diff);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::budget_exceeded) throw;
    }
  }
  // The renormalized majorant (nu + 1) / 2 dominates (f - h) / 2.
  bool ok = true;
  for (std::size_t i = 0; i < h.size(); ++i) {
    ok = ok && std::abs(diff.values()[i]) / 2.0 <= (nu.values()[i] + 1.0) / 2.0 + 1e-12;
  }
  result.majorant_check = ok;
  return result;
}

}  // namespace

int default_max_iterations(double mean_nu, double epsilon) {
  require_epsilon(epsilon);
  const double t = std::ceil(16.0 * (1.0 + mean_nu) * (1.0 + mean_nu) / (epsilon * epsilon));
  if (t > 1e9) throw Error(ErrorKind::invalid_parameter, "iteration cap too large; raise epsilon");
  return static_cast<int>(t);
}

Decomposition<GroupFunction> dense_model(const GroupFunction& g, const GroupFunction& nu, int s, double epsilon,
                                         const DecomposeOptions& options) {
  if (!(g.group() == nu.group())) throw Error(ErrorKind::invalid_input, "g and nu live on different groups");
  auto result = run_dense_model(g, nu, epsilon, options, [&](const GroupFunction& residual) {
    auto found = best_dual(residual, s, options.search);
    const auto d = found.dual.realized.values();
    return OracleAnswer{std::vector<double>(d.begin(), d.end()), found.correlation, found.exact};
  });
  if (options.measure_residual_norm) {
    try {
      result.residual_norm = gowers_norm(g - result.model, s, NormMethod::automatic, options.search.budget).value;
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::budget_exceeded) throw;
    }
  }
  return result;
}

Decomposition<TensorFunction> dense_model(const TensorFunction& g, const TensorFunction& nu, double epsilon,
                                          const DecomposeOptions& options) {
  if (!g.same_shape(nu)) throw Error(ErrorKind::invalid_input, "g and nu differ in shape");
  auto result = run_dense_model(g, nu, epsilon, options, [&](const TensorFunction& residual) {
    auto found = cut_norm(residual, options.search);
    const auto K = factor_product(found.factors);
    const double c = average(residual * K);
    const auto d = K.values();
    return OracleAnswer{std::vector<double>(d.begin(), d.end()), c, found.exact};
  });
  if (options.measure_residual_norm) {
    try {
      result.residual_norm = box_norm(g - result.model, options.search.budget).value;
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::budget_exceeded) throw;
    }
  }
  return result;
}

Decomposition<GroupFunction> kvn_group(const GroupFunction& f, const GroupFunction& nu, int s, double epsilon,
                                       const DecomposeOptions& options) {
  if (!(f.group() == nu.group())) throw Error(ErrorKind::invalid_input, "f and nu live on different groups");
  DecomposeOptions inner = options;
  inner.measure_residual_norm = false;
  return run_kvn(
      f, nu, epsilon, options,
      [&](const GroupFunction& piece, const GroupFunction& majorant) {
        return dense_model(piece, majorant, s, epsilon, inner);
      },
      [&](const GroupFunction& diff) {
        const auto found = best_dual(diff, s, options.search);
        return std::make_pair(found.correlation, found.exact);
      },
      [&](const GroupFunction& diff) {
        return gowers_norm(diff, s, NormMethod::automatic, options.search.budget).value;
      });
}

Decomposition<TensorFunction> kvn_tensor(const TensorFunction& F, const TensorFunction& nu, double epsilon,
                                         const DecomposeOptions& options) {
  if (!F.same_shape(nu)) throw Error(ErrorKind::invalid_input, "F and nu differ in shape");
  DecomposeOptions inner = options;
  inner.measure_residual_norm = false;
  return run_kvn(
      F, nu, epsilon, options,
      [&](const TensorFunction& piece, const TensorFunction& majorant) {
        return dense_model(piece, majorant, epsilon, inner);
      },
      [&](const TensorFunction& diff) {
        const auto found = cut_norm(diff, options.search);
        return std::make_pair(found.lower_bound, found.exact);
      },
      [&](const TensorFunction& diff) { return box_norm(diff, options.search.budget).value; });
}

}  // namespace uninorm
