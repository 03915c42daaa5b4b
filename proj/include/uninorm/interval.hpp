#pragma once

#include "uninorm/budget.hpp"
#include "uninorm/decompose.hpp"
#include "uninorm/group.hpp"
#include "uninorm/uniformity.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace uninorm {

/// f : [N] -> R, stored with f(1) at index 0.
class IntervalFunction {
 public:
  explicit IntervalFunction(std::vector<double> values);

  std::int64_t length() const noexcept { return static_cast<std::int64_t>(values_.size()); }
  /// f(n) for 1 <= n <= N.
  double at(std::int64_t n) const;
  std::span<const double> values() const noexcept { return values_; }

 private:
  std::vector<double> values_;
};

/// Z_{N'} is identified with {-k, ..., k}; the integer n sits at code n mod N'.
Element integer_code(std::int64_t n, std::int64_t n_prime);

/// f extended by zero to Z_{N'} (n_prime > N).
GroupFunction embed(const IntervalFunction& f, std::int64_t n_prime);

/// H restricted to [N].
IntervalFunction restrict_to_interval(const GroupFunction& H, std::int64_t n);

/// ||f 1_[N]||_{U^s(Z_N')} / ||1_[N]||_{U^s(Z_N')}; requires n_prime > 2N.
NormResult interval_norm(const IntervalFunction& f, int s, std::int64_t n_prime,
                         const Budget& budget = kDefaultBudget);

/// Smallest prime > 2N, a valid default modulus for interval_norm.
std::int64_t default_modulus(std::int64_t n);

/// Deterministic Miller-Rabin.
bool is_prime(std::uint64_t n);

/// Smallest prime >= lo, or nullopt if it exceeds hi.
std::optional<std::uint64_t> smallest_prime_in(std::uint64_t lo, std::uint64_t hi);

struct CutoffOptions {
  /// Replaces alpha = (eps / 32C)^{2^s}; N_0 = ceil(2 / alpha) follows it.
  std::optional<double> alpha;
  /// Accept the smallest prime >= CN even above 2CN.
  bool widen = false;
};

struct CutoffProfile {
  std::int64_t n = 0;
  double c = 0.0;
  double epsilon = 0.0;
  int s = 0;
  double alpha = 0.0;
  std::int64_t n_zero = 0;
  std::int64_t n_prime = 0;
  std::int64_t l = 0;
  /// L, with 2L the least even integer >= N.
  std::int64_t big_l = 0;
  GroupFunction phi = GroupFunction::zero(FiniteAbelianGroup::cyclic(1));

  /// phi at the integer n in {-k, ..., k}.
  double at(std::int64_t n) const;
};

/// alpha = (eps / (32 C))^{2^s}.
double cutoff_alpha(double c, double epsilon, int s);

/// Trapezoid phi on Z_{N'}: 0 up to -l+1, linear to 1 at 1, 1 on [2L],
/// linear down to 0 at 2L+l, 0 beyond. Throws CutoffTooSmall if N < N_0.
CutoffProfile build_cutoff(std::int64_t n, double c, double epsilon, int s, const CutoffOptions& options = {});

struct FourierL1 {
  double l1 = 0.0;
  double bound = 0.0;
  bool holds = false;
};

/// ||hat phi||_{l1(Z_N')} with the averaged transform, and 4L/l.
FourierL1 cutoff_fourier_bound(const CutoffProfile& profile);

struct TransferOptions {
  CutoffOptions cutoff;
  DecomposeOptions decompose;
};

struct TransferResult {
  CutoffProfile profile;
  /// KvN decomposition of the zero extension on Z_N'.
  Decomposition<GroupFunction> decomposition;
  IntervalFunction h;
  /// ||f~ - H||_{U^s(Z_N')}
  double residual_group = 0.0;
  /// (4N / l) ||f~ - H||_{U^s(Z_N')}
  double fourier_term = 0.0;
  /// (3l / (CN))^{1/2^s}
  double truncation_term = 0.0;
  /// ||1_[N]||_{U^s(Z_N')}, at least 1 / 2C.
  double normalizer = 0.0;
  /// 2C (fourier_term + truncation_term)
  double assembled_bound = 0.0;
  /// ||f - h||_{U^s[N]} at modulus N'.
  double measured = 0.0;
  /// max |f~ - h~ - ((f~ - H) phi + H (phi - 1_[N]))| over Z_N'.
  double identity_residual = 0.0;
  bool bound_holds = false;
};

/// Decomposes the zero extension of f on Z_N' (N' the prime of the
/// cut-off profile) and transfers h = H restricted to [N] back.
TransferResult transfer_kvn(const IntervalFunction& f, const GroupFunction& nu, int s, double c, double epsilon,
                            const TransferOptions& options = {});

}  // namespace uninorm
