#include "uninorm/uniformity.hpp"

#include "cube.hpp"
#include "parallel.hpp"
#include "uninorm/boxnorms.hpp"
#include "uninorm/error.hpp"
#include "uninorm/fourier.hpp"
#include "uninorm/random.hpp"
#include "uninorm/summation.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <optional>
#include <string>

namespace uninorm {

namespace {

using detail::Adder;
using detail::root_of_cube_average;
using detail::sign_of;

void require_order(int s, int min_s) {
  if (s < min_s) {
    throw Error(ErrorKind::invalid_parameter,
                "s must be >= " + std::to_string(min_s) + ", got " + std::to_string(s));
  }
  if (s > 16) throw Error(ErrorKind::invalid_parameter, "s too large");
}

std::uint64_t pow_u(std::int64_t base, int exp) {
  return checked_pow(static_cast<std::uint64_t>(base), static_cast<std::uint64_t>(exp));
}

}  // namespace

std::string_view to_string(NormMethod method) {
  switch (method) {
    case NormMethod::automatic: return "auto";
    case NormMethod::direct_enumeration: return "direct-enumeration";
    case NormMethod::recursive_derivative: return "recursive-derivative";
    case NormMethod::fourier_fast_path: return "fourier-fast-path";
    case NormMethod::lifted_tensor: return "lifted-tensor";
    case NormMethod::tensor_contraction: return "tensor-contraction";
  }
  return "unknown";
}

NormMethod parse_norm_method(std::string_view name) {
  if (name == "auto" || name == "automatic") return NormMethod::automatic;
  if (name == "direct" || name == "direct-enumeration") return NormMethod::direct_enumeration;
  if (name == "recursive" || name == "recursive-derivative") return NormMethod::recursive_derivative;
  if (name == "fourier" || name == "fourier-fast-path") return NormMethod::fourier_fast_path;
  if (name == "lifted" || name == "lifted-tensor") return NormMethod::lifted_tensor;
  if (name == "contraction" || name == "tensor-contraction") return NormMethod::tensor_contraction;
  throw Error(ErrorKind::invalid_parameter, "unknown norm method '" + std::string(name) + "'");
}

std::string_view to_string(SearchMode mode) {
  return mode == SearchMode::exhaustive ? "exhaustive" : "alternating";
}

SearchMode parse_search_mode(std::string_view name) {
  if (name == "exhaustive") return SearchMode::exhaustive;
  if (name == "alternating") return SearchMode::alternating;
  throw Error(ErrorKind::invalid_parameter, "unknown search mode '" + std::string(name) + "'");
}

NormResult gowers_norm_direct(const GroupFunction& f, int s, const Budget& budget) {
  require_order(s, 2);
  const std::int64_t n = f.group().order();
  const std::uint64_t terms = pow_u(n, s + 1);
  if (terms > budget.enumeration) {
    throw Error(ErrorKind::budget_exceeded,
                "direct U^" + std::to_string(s) + " needs " + std::to_string(terms) + " terms");
  }
  const Adder add(f.group());
  const double* v = f.values().data();
  const double total = detail::parallel_sum(n, [&](std::int64_t h0) {
    std::vector<std::int64_t> h(static_cast<std::size_t>(s), 0);
    h[0] = h0;
    std::vector<std::int64_t> rest(static_cast<std::size_t>(s - 1), 0);
    std::vector<std::int64_t> offsets;
    PairwiseAccumulator acc;
    do {
      std::copy(rest.begin(), rest.end(), h.begin() + 1);
      detail::cube_offsets(add, h, offsets);
      for (std::int64_t x = 0; x < n; ++x) {
        double prod = 1.0;
        for (std::int64_t off : offsets) prod *= v[add(x, off)];
        acc.add(prod);
      }
    } while (detail::next_tuple(rest, n));
    return acc.sum();
  });
  const double power = std::ldexp(1.0, s);
  const double avg = total / static_cast<double>(terms);
  return {root_of_cube_average(avg, power, std::pow(f.max_abs(), power)), NormMethod::direct_enumeration,
          terms * (std::uint64_t{1} << s)};
}

namespace {

std::uint64_t fft_cost(std::int64_t n) {
  if (n <= 1) return 1;
  return static_cast<std::uint64_t>(5.0 * static_cast<double>(n) * std::ceil(std::log2(static_cast<double>(n))));
}

double fourier_fourth_power(const GroupDft& dft, std::span<const double> values) {
  const auto coeffs = dft.transform(values);
  std::vector<double> fourth(coeffs.size());
  for (std::size_t k = 0; k < coeffs.size(); ++k) {
    const double a = std::norm(coeffs[k]);
    fourth[k] = a * a;
  }
  return pairwise_sum(fourth);
}

/// ||f||_{U^k}^{2^k} by multiplicative derivatives, serial.
double recursive_power(const FiniteAbelianGroup& g, const GroupDft* dft, std::span<const double> values,
                       int k) {
  const std::int64_t n = g.order();
  if (k == 1) {
    const double m = pairwise_mean(values);
    return m * m;
  }
  if (k == 2 && dft != nullptr) return fourier_fourth_power(*dft, values);
  std::vector<double> derivative(values.size());
  std::vector<double> partial(static_cast<std::size_t>(n));
  for (std::int64_t h = 0; h < n; ++h) {
    for (std::int64_t x = 0; x < n; ++x) {
      derivative[static_cast<std::size_t>(x)] = values[static_cast<std::size_t>(x)] *
                                                values[static_cast<std::size_t>(g.add(x, h))];
    }
    partial[static_cast<std::size_t>(h)] = recursive_power(g, dft, derivative, k - 1);
  }
  return pairwise_mean(partial);
}

}  // namespace

NormResult gowers_norm_u2_fourier(const GroupFunction& f) {
  const GroupDft dft(f.group());
  const double total = fourier_fourth_power(dft, f.values());
  return {root_of_cube_average(total, 4.0, std::pow(f.max_abs(), 4.0)), NormMethod::fourier_fast_path,
          fft_cost(f.group().order()) + static_cast<std::uint64_t>(f.group().order())};
}

std::uint64_t recursive_cost(std::int64_t n, int s, RecursionBase base) {
  require_order(s, 2);
  const bool fourier = base == RecursionBase::fourier;
  const std::uint64_t leaf = fourier ? fft_cost(n) + static_cast<std::uint64_t>(n) : static_cast<std::uint64_t>(n);
  return pow_u(n, s - (fourier ? 2 : 1)) * (leaf + static_cast<std::uint64_t>(n));
}

NormResult gowers_norm_recursive(const GroupFunction& f, int s, RecursionBase base, const Budget& budget) {
  require_order(s, 2);
  const auto& g = f.group();
  const std::int64_t n = g.order();
  const std::uint64_t cost = recursive_cost(n, s, base);
  if (cost > budget.enumeration) {
    throw Error(ErrorKind::budget_exceeded,
                "recursive U^" + std::to_string(s) + " needs about " + std::to_string(cost) + " operations");
  }
  std::optional<GroupDft> dft;
  if (base == RecursionBase::fourier) dft.emplace(g);
  const GroupDft* plan = dft ? &*dft : nullptr;

  double power_avg = 0.0;
  if (s == 2 && plan != nullptr) {
    power_avg = recursive_power(g, plan, f.values(), 2);
  } else {
    // Outermost derivative level in parallel; partials reduced pairwise.
    const auto values = f.values();
    const double total = detail::parallel_sum(n, [&](std::int64_t h) {
      std::vector<double> derivative(values.size());
      for (std::int64_t x = 0; x < n; ++x) {
        derivative[static_cast<std::size_t>(x)] = values[static_cast<std::size_t>(x)] *
                                                  values[static_cast<std::size_t>(g.add(x, h))];
      }
      return recursive_power(g, plan, derivative, s - 1);
    });
    power_avg = total / static_cast<double>(n);
  }

  const double power = std::ldexp(1.0, s);
  return {root_of_cube_average(power_avg, power, std::pow(f.max_abs(), power)),
          NormMethod::recursive_derivative, cost};
}

NormResult gowers_norm(const GroupFunction& f, int s, NormMethod method, const Budget& budget) {
  require_order(s, 2);
  switch (method) {
    case NormMethod::automatic:
      return s == 2 ? gowers_norm_u2_fourier(f) : gowers_norm_recursive(f, s, RecursionBase::fourier, budget);
    case NormMethod::direct_enumeration:
      return gowers_norm_direct(f, s, budget);
    case NormMethod::recursive_derivative:
      return gowers_norm_recursive(f, s, RecursionBase::fourier, budget);
    case NormMethod::fourier_fast_path:
      if (s != 2) throw Error(ErrorKind::invalid_parameter, "the Fourier path computes U^2 only");
      return gowers_norm_u2_fourier(f);
    case NormMethod::lifted_tensor:
    case NormMethod::tensor_contraction: {
      auto result = box_norm(lift_to_tensor(f, s, budget), budget);
      result.method = NormMethod::lifted_tensor;
      return result;
    }
  }
  throw Error(ErrorKind::invalid_parameter, "unknown norm method");
}

namespace {

void require_same_group(std::span<const GroupFunction> fs) {
  for (const auto& f : fs) {
    if (!(f.group() == fs.front().group())) throw Error(ErrorKind::invalid_input, "group mismatch");
  }
}

int cube_dimension(std::size_t count, std::size_t extra) {
  // count + extra must be 2^s with s >= 1
  const std::size_t total = count + extra;
  if (total < 2 || (total & (total - 1)) != 0) {
    throw Error(ErrorKind::invalid_input, "family size must be 2^s" + std::string(extra ? " - 1" : ""));
  }
  return std::countr_zero(total);
}

std::vector<const double*> pointers(std::span<const GroupFunction> fs) {
  std::vector<const double*> p;
  p.reserve(fs.size());
  for (const auto& f : fs) p.push_back(f.values().data());
  return p;
}

}  // namespace

GroupFunction cube_marginal(std::span<const GroupFunction> fs) {
  const int s = cube_dimension(fs.size(), 1);
  require_same_group(fs);
  const auto& g = fs.front().group();
  const Adder add(g);
  std::vector<double> out(static_cast<std::size_t>(g.order()));
  detail::marginal_parallel(add, s, pointers(fs), out);
  return GroupFunction(g, std::move(out));
}

double cube_correlation(std::span<const GroupFunction> fs) {
  cube_dimension(fs.size(), 0);
  require_same_group(fs);
  const auto marginal = cube_marginal(fs.subspan(1));
  return average(fs.front() * marginal);
}

double weak_objective(const GroupFunction& f, std::span<const GroupFunction> members) {
  std::vector<GroupFunction> fs;
  fs.reserve(members.size() + 1);
  fs.push_back(f);
  fs.insert(fs.end(), members.begin(), members.end());
  return cube_correlation(fs);
}

GroupFunction majorant_marginal(const GroupFunction& nu, int s) {
  require_order(s, 1);
  std::vector<GroupFunction> fs((std::size_t{1} << s) - 1, nu);
  return cube_marginal(fs);
}

double moment_estimate(const GroupFunction& nu, int s, std::span<const Element> set, int k) {
  if (k != 1 && k != 2) throw Error(ErrorKind::invalid_parameter, "moment order k must be 1 or 2");
  for (double v : nu.values()) {
    if (v < 0.0) throw Error(ErrorKind::invalid_majorant, "majorant takes a negative value");
  }
  const auto indicator = GroupFunction::indicator(nu.group(), set);
  const auto calib = majorant_marginal(nu, s);
  const auto moment = k == 1 ? calib : calib * calib;
  return std::abs(average(indicator * moment) - average(indicator));
}

// ---------------------------------------------------------------------------
// Weak norm search.

namespace {

/// Search state over group families: member m (1..2^s-1) lives at
/// values[(m-1)*n .. m*n).
struct GroupSearch {
  const Adder& add;
  int s;
  std::int64_t n;
  const double* f;

  std::size_t members() const { return (std::size_t{1} << s) - 1; }

  /// Marginal at vertex t: reflect the cube so that t becomes the origin.
  void marginal(std::span<const double> h, unsigned t, std::span<double> out) const {
    std::vector<const double*> g(members());
    for (unsigned w = 1; w <= members(); ++w) {
      const unsigned m = w ^ t;
      g[w - 1] = m == 0 ? f : h.data() + static_cast<std::size_t>(m - 1) * static_cast<std::size_t>(n);
    }
    detail::marginal_serial(add, s, g, out);
  }
};

DualFamily lift_group_family(int s, std::span<const GroupFunction> members) {
  std::vector<TensorFunction> lifted;
  lifted.reserve(members.size());
  for (const auto& h : members) lifted.push_back(lift_to_tensor(h, s));
  return DualFamily(s, std::move(lifted));
}

std::vector<GroupFunction> unpack(const FiniteAbelianGroup& g, std::span<const double> h, std::size_t count) {
  const auto n = static_cast<std::size_t>(g.order());
  std::vector<GroupFunction> out;
  out.reserve(count);
  for (std::size_t m = 0; m < count; ++m) {
    out.emplace_back(g, std::vector<double>(h.begin() + static_cast<std::ptrdiff_t>(m * n),
                                            h.begin() + static_cast<std::ptrdiff_t>((m + 1) * n)));
  }
  return out;
}

}  // namespace

WeakNormEstimate weak_norm(const GroupFunction& f, int s, const SearchOptions& options) {
  require_order(s, 2);
  const auto& g = f.group();
  const std::int64_t n = g.order();
  const Adder add(g);
  const GroupSearch search{add, s, n, f.values().data()};
  const std::size_t members = search.members();
  const auto un = static_cast<std::size_t>(n);

  std::vector<double> best_h;
  std::uint64_t evaluations = 0;
  bool exact = false;

  if (options.mode == SearchMode::exhaustive) {
    const std::uint64_t bits = static_cast<std::uint64_t>(n) * members;
    if (bits > 63 || checked_pow(2, bits) > options.budget.exhaustive) {
      throw Error(ErrorKind::budget_exceeded, "exhaustive weak-norm search needs 2^" + std::to_string(bits) +
                                                  " sign patterns");
    }
    // The last member (all-ones mask) is optimized in closed form.
    const std::uint64_t free_bits = static_cast<std::uint64_t>(n) * (members - 1);
    const auto patterns = static_cast<std::int64_t>(std::uint64_t{1} << free_bits);
    std::vector<double> values(static_cast<std::size_t>(patterns));
    const auto last = static_cast<unsigned>(members);
#pragma omp parallel
    {
      std::vector<double> h(members * un, 1.0);
      std::vector<double> marginal(un);
#pragma omp for schedule(static)
      for (std::int64_t p = 0; p < patterns; ++p) {
        for (std::uint64_t b = 0; b < free_bits; ++b) h[b] = ((p >> b) & 1) != 0 ? -1.0 : 1.0;
        search.marginal(h, last, marginal);
        for (auto& m : marginal) m = std::abs(m);
        values[static_cast<std::size_t>(p)] = pairwise_mean(marginal);
      }
    }
    const auto best = std::max_element(values.begin(), values.end()) - values.begin();
    best_h.assign(members * un, 1.0);
    for (std::uint64_t b = 0; b < free_bits; ++b) best_h[b] = ((best >> b) & 1) != 0 ? -1.0 : 1.0;
    std::vector<double> marginal(un);
    search.marginal(best_h, last, marginal);
    for (std::size_t x = 0; x < un; ++x) best_h[(members - 1) * un + x] = sign_of(marginal[x]);
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
      std::vector<double> h = rng.signs(members * un);
      std::vector<double> marginal(un);
      double value = -1.0;
      std::uint64_t count = 0;
      for (int sweep = 0; sweep < options.max_sweeps; ++sweep) {
        double after = value;
        for (unsigned t = 1; t <= members; ++t) {
          search.marginal(h, t, marginal);
          double* ht = h.data() + (t - 1) * un;
          for (std::size_t x = 0; x < un; ++x) {
            ht[x] = sign_of(marginal[x]);
            marginal[x] = std::abs(marginal[x]);
          }
          after = pairwise_mean(marginal);
        }
        ++count;
        const bool stalled = after - value < options.tolerance;
        value = after;
        if (stalled) break;
      }
      found[static_cast<std::size_t>(r)] = std::move(h);
      objective[static_cast<std::size_t>(r)] = value;
      sweeps[static_cast<std::size_t>(r)] = count;
    }
    const auto best = std::max_element(objective.begin(), objective.end()) - objective.begin();
    best_h = std::move(found[static_cast<std::size_t>(best)]);
    for (auto c : sweeps) evaluations += c;
  }

  auto group_members = unpack(g, best_h, members);
  const double value = weak_objective(f, group_members);
  return WeakNormEstimate{.lower_bound = value,
                          .witness = lift_group_family(s, group_members),
                          .exact = exact,
                          .group_members = std::move(group_members),
                          .factors = {},
                          .evaluations = evaluations};
}

WeakNormEstimate additive_cut_norm(const GroupFunction& f, int s, const SearchOptions& options) {
  require_order(s, 2);
  return cut_norm(lift_to_tensor(f, s, options.budget), options);
}

NormResult uniformity_norm_ell(const GroupFunction& f, int s, int ell, const Budget& budget) {
  require_order(s, 2);
  auto result = box_norm_ell(lift_to_tensor(f, s, budget), ell, budget);
  result.method = NormMethod::lifted_tensor;
  return result;
}

}  // namespace uninorm
