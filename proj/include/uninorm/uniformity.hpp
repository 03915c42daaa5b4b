#pragma once

#include "uninorm/budget.hpp"
#include "uninorm/group.hpp"
#include "uninorm/tensor.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace uninorm {

enum class NormMethod {
  automatic,
  direct_enumeration,
  recursive_derivative,
  fourier_fast_path,
  lifted_tensor,
  tensor_contraction,
};

std::string_view to_string(NormMethod method);
NormMethod parse_norm_method(std::string_view name);

struct NormResult {
  double value = 0.0;
  NormMethod method = NormMethod::automatic;
  /// Elementary multiply-adds performed.
  std::uint64_t cost = 0;
};

/// Base case used by the recursive U^s evaluation once s reaches 2.
enum class RecursionBase {
  fourier,          // (sum |hat f|^4)^{1/4}
  autocorrelation,  // E_h (E_x f(x) f(x+h))^2, no transform
};

/// ||f||_{U^s(Z)}. `automatic` picks the Fourier path at s = 2 and the
/// recursive path otherwise; a forced direct enumeration checks
/// |Z|^{s+1} against the budget.
NormResult gowers_norm(const GroupFunction& f, int s, NormMethod method = NormMethod::automatic,
                       const Budget& budget = kDefaultBudget);

NormResult gowers_norm_direct(const GroupFunction& f, int s, const Budget& budget = kDefaultBudget);
NormResult gowers_norm_u2_fourier(const GroupFunction& f);
NormResult gowers_norm_recursive(const GroupFunction& f, int s,
                                 RecursionBase base = RecursionBase::fourier,
                                 const Budget& budget = kDefaultBudget);

/// Operation count gowers_norm_recursive reports (and checks against the
/// budget) for a group of order n.
std::uint64_t recursive_cost(std::int64_t n, int s, RecursionBase base = RecursionBase::fourier);

/// E_{x,h} prod_omega f_omega(x + omega.h); fs[m] is f at the vertex whose
/// bit i is omega_i (so fs.size() == 2^s).
double cube_correlation(std::span<const GroupFunction> fs);

/// x -> E_h prod_{omega != 0} f_omega(x + omega.h); fs[m - 1] is f at the
/// nonzero vertex with bitmask m (so fs.size() == 2^s - 1).
GroupFunction cube_marginal(std::span<const GroupFunction> fs);

/// Calibration function: cube_marginal with every factor equal to nu.
GroupFunction majorant_marginal(const GroupFunction& nu, int s);

/// |E[1_A N^k] - P(A)| with N the majorant marginal of nu.
double moment_estimate(const GroupFunction& nu, int s, std::span<const Element> set, int k);

enum class SearchMode { exhaustive, alternating };

std::string_view to_string(SearchMode mode);
SearchMode parse_search_mode(std::string_view name);

struct SearchOptions {
  SearchMode mode = SearchMode::exhaustive;
  int restarts = 32;
  std::uint64_t seed = 7;
  /// Hard cap on sweeps per restart.
  int max_sweeps = 1000;
  /// A sweep improving the objective by less than this ends a restart.
  double tolerance = 1e-12;
  Budget budget = kDefaultBudget;
};

struct WeakNormEstimate {
  double lower_bound = 0.0;
  /// Optimizing family as tensors on V^s (group witnesses are lifted,
  /// H_omega(z) = h_omega(z_1 + ... + z_s)).
  DualFamily witness;
  bool exact = false;
  /// Group-level witness <h_omega>, members[m - 1] for mask m; empty for
  /// tensor searches.
  std::vector<GroupFunction> group_members;
  /// Cut searches only: G_i on V^{s-1} (coordinate i dropped) such that
  /// the objective equals E_u F(u) prod_i G_i(u_{-i}).
  std::vector<TensorFunction> factors;
  /// Number of sweeps (alternating) or patterns (exhaustive) evaluated.
  std::uint64_t evaluations = 0;
};

/// ||f||_{w^s(Z)} as a certified lower bound, exact in exhaustive mode.
WeakNormEstimate weak_norm(const GroupFunction& f, int s, const SearchOptions& options = {});

/// ||f(x_1 + ... + x_s)||_{cut(Z^s)}.
WeakNormEstimate additive_cut_norm(const GroupFunction& f, int s, const SearchOptions& options = {});

/// ||f||_{U^s_ell(Z)} via the lifted tensor.
NormResult uniformity_norm_ell(const GroupFunction& f, int s, int ell,
                               const Budget& budget = kDefaultBudget);

/// Correlation of f against a group family (members[m - 1] at mask m).
double weak_objective(const GroupFunction& f, std::span<const GroupFunction> members);

}  // namespace uninorm
