#include "uninorm/interval.hpp"

#include "uninorm/error.hpp"
#include "uninorm/fourier.hpp"
#include "uninorm/summation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace uninorm {

IntervalFunction::IntervalFunction(std::vector<double> values) : values_(std::move(values)) {
  if (values_.empty()) throw Error(ErrorKind::invalid_input, "interval function needs N >= 1 values");
  for (double v : values_) {
    if (!std::isfinite(v)) throw Error(ErrorKind::invalid_input, "interval function values must be finite");
  }
}

double IntervalFunction::at(std::int64_t n) const {
  if (n < 1 || n > length()) throw Error(ErrorKind::invalid_element, "point " + std::to_string(n) + " outside [N]");
  return values_[static_cast<std::size_t>(n - 1)];
}

Element integer_code(std::int64_t n, std::int64_t n_prime) {
  const std::int64_t r = n % n_prime;
  return r < 0 ? r + n_prime : r;
}

GroupFunction embed(const IntervalFunction& f, std::int64_t n_prime) {
  if (n_prime <= f.length()) throw Error(ErrorKind::invalid_parameter, "modulus must exceed N");
  std::vector<double> v(static_cast<std::size_t>(n_prime), 0.0);
  for (std::int64_t n = 1; n <= f.length(); ++n) v[static_cast<std::size_t>(integer_code(n, n_prime))] = f.at(n);
  return GroupFunction(FiniteAbelianGroup::cyclic(n_prime), std::move(v));
}

IntervalFunction restrict_to_interval(const GroupFunction& H, std::int64_t n) {
  const std::int64_t n_prime = H.group().order();
  if (n_prime <= n) throw Error(ErrorKind::invalid_parameter, "modulus must exceed N");
  std::vector<double> v(static_cast<std::size_t>(n));
  for (std::int64_t k = 1; k <= n; ++k) v[static_cast<std::size_t>(k - 1)] = H[integer_code(k, n_prime)];
  return IntervalFunction(std::move(v));
}

NormResult interval_norm(const IntervalFunction& f, int s, std::int64_t n_prime, const Budget& budget) {
  if (n_prime <= 2 * f.length()) {
    throw Error(ErrorKind::invalid_parameter,
                "modulus " + std::to_string(n_prime) + " must exceed 2N = " + std::to_string(2 * f.length()));
  }
  const auto num = gowers_norm(embed(f, n_prime), s, NormMethod::automatic, budget);
  const IntervalFunction ones(std::vector<double>(static_cast<std::size_t>(f.length()), 1.0));
  const auto den = gowers_norm(embed(ones, n_prime), s, NormMethod::automatic, budget);
  return {num.value / den.value, num.method, num.cost + den.cost};
}

namespace {

__extension__ typedef unsigned __int128 u128;

std::uint64_t mul_mod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>(static_cast<u128>(a) * b % m);
}

std::uint64_t pow_mod(std::uint64_t a, std::uint64_t e, std::uint64_t m) {
  std::uint64_t r = 1 % m;
  a %= m;
  while (e > 0) {
    if (e & 1) r = mul_mod(r, a, m);
    a = mul_mod(a, a, m);
    e >>= 1;
  }
  return r;
}

}  // namespace

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  static constexpr std::uint64_t kWitnesses[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};
  for (std::uint64_t p : kWitnesses) {
    if (n % p == 0) return n == p;
  }
  std::uint64_t d = n - 1;
  int r = 0;
  while (d % 2 == 0) {
    d /= 2;
    ++r;
  }
  for (std::uint64_t a : kWitnesses) {
    std::uint64_t x = pow_mod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int i = 1; i < r && composite; ++i) {
      x = mul_mod(x, x, n);
      composite = x != n - 1;
    }
    if (composite) return false;
  }
  return true;
}

std::optional<std::uint64_t> smallest_prime_in(std::uint64_t lo, std::uint64_t hi) {
  for (std::uint64_t p = std::max<std::uint64_t>(lo, 2); p <= hi; ++p) {
    if (is_prime(p)) return p;
    if (p == std::numeric_limits<std::uint64_t>::max()) break;
  }
  return std::nullopt;
}

std::int64_t default_modulus(std::int64_t n) {
  const auto p = smallest_prime_in(static_cast<std::uint64_t>(2 * n + 1), std::numeric_limits<std::int64_t>::max());
  if (!p) throw Error(ErrorKind::search_failure, "no prime modulus found");
  return static_cast<std::int64_t>(*p);
}

double cutoff_alpha(double c, double epsilon, int s) { return std::pow(epsilon / (32.0 * c), std::ldexp(1.0, s)); }

double CutoffProfile::at(std::int64_t x) const { return phi[integer_code(x, n_prime)]; }

CutoffProfile build_cutoff(std::int64_t n, double c, double epsilon, int s, const CutoffOptions& options) {
  if (n < 1) throw Error(ErrorKind::invalid_parameter, "N must be >= 1");
  if (!(c >= 20.0)) throw Error(ErrorKind::invalid_parameter, "C must be >= 20");
  if (!(epsilon > 0.0 && epsilon <= 1.0)) throw Error(ErrorKind::invalid_parameter, "epsilon must lie in (0, 1]");
  if (s < 2) throw Error(ErrorKind::invalid_parameter, "s must be >= 2");
  const double alpha = options.alpha ? *options.alpha : cutoff_alpha(c, epsilon, s);
  if (!(alpha > 0.0 && alpha <= 1.0)) throw Error(ErrorKind::invalid_parameter, "alpha must lie in (0, 1]");

  const double n0_real = std::ceil(2.0 / alpha);
  const std::int64_t n_zero = n0_real >= 9.0e18 ? std::numeric_limits<std::int64_t>::max()
                                                : static_cast<std::int64_t>(n0_real);
  if (n < n_zero) throw CutoffTooSmall(n, n_zero);

  const double cn = c * static_cast<double>(n);
  const auto lo = static_cast<std::uint64_t>(std::ceil(cn));
  const auto hi = static_cast<std::uint64_t>(std::floor(2.0 * cn));
  auto prime = smallest_prime_in(lo, hi);
  if (!prime && options.widen) prime = smallest_prime_in(lo, std::numeric_limits<std::int64_t>::max());
  if (!prime) {
    throw Error(ErrorKind::search_failure,
                "no prime in [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
  }

  CutoffProfile p;
  p.n = n;
  p.c = c;
  p.epsilon = epsilon;
  p.s = s;
  p.alpha = alpha;
  p.n_zero = n_zero;
  p.n_prime = static_cast<std::int64_t>(*prime);
  p.l = static_cast<std::int64_t>(std::floor(alpha * static_cast<double>(n)));
  p.big_l = (n + 1) / 2;
  if (p.l < 2 || p.l > p.big_l) {
    throw Error(ErrorKind::invalid_parameter, "ramp length l = " + std::to_string(p.l) + " must satisfy 2 <= l <= L");
  }
  if (2 * p.big_l + 2 * p.l >= p.n_prime) throw Error(ErrorKind::invalid_parameter, "modulus too small for the ramps");

  const std::int64_t k = (p.n_prime - 1) / 2;
  const auto l = static_cast<double>(p.l);
  std::vector<double> phi(static_cast<std::size_t>(p.n_prime), 0.0);
  for (std::int64_t x = -k; x <= k; ++x) {
    double v = 0.0;
    if (x >= -p.l + 1 && x <= 1) {
      v = static_cast<double>(x + p.l - 1) / l;
    } else if (x >= 1 && x <= 2 * p.big_l) {
      v = 1.0;
    } else if (x >= 2 * p.big_l && x <= 2 * p.big_l + p.l) {
      v = static_cast<double>(2 * p.big_l + p.l - x) / l;
    }
    phi[static_cast<std::size_t>(integer_code(x, p.n_prime))] = v;
  }
  p.phi = GroupFunction(FiniteAbelianGroup::cyclic(p.n_prime), std::move(phi));
  return p;
}

FourierL1 cutoff_fourier_bound(const CutoffProfile& profile) {
  const auto coeffs = fourier_coefficients(profile.phi);
  PairwiseAccumulator acc;
  for (const auto& z : coeffs) acc.add(std::abs(z));
  FourierL1 out{acc.sum(), 4.0 * static_cast<double>(profile.big_l) / static_cast<double>(profile.l)};
  out.holds = out.l1 <= out.bound + 1e-9;
  return out;
}

TransferResult transfer_kvn(const IntervalFunction& f, const GroupFunction& nu, int s, double c, double epsilon,
                            const TransferOptions& options) {
  auto profile = build_cutoff(f.length(), c, epsilon, s, options.cutoff);
  const std::int64_t n_prime = profile.n_prime;
  if (!is_prime(static_cast<std::uint64_t>(nu.group().order())) || nu.group().factors().size() != 1) {
    throw Error(ErrorKind::invalid_parameter, "majorant must live on Z_N' with N' prime");
  }
  if (nu.group().order() != n_prime) {
    throw Error(ErrorKind::invalid_parameter, "majorant lives on Z_" + std::to_string(nu.group().order()) +
                                                  " but the cut-off modulus is " + std::to_string(n_prime));
  }
  const auto ft = embed(f, n_prime);
  auto dec = kvn_group(ft, nu, s, epsilon, options.decompose);
  const GroupFunction& H = dec.model;
  auto h = restrict_to_interval(H, f.length());

  const auto& budget = options.decompose.search.budget;
  const double residual = gowers_norm(ft - H, s, NormMethod::automatic, budget).value;
  const double big_n = static_cast<double>(f.length());
  const double fourier_term = 4.0 * big_n / static_cast<double>(profile.l) * residual;
  const double truncation_term =
      std::pow(3.0 * static_cast<double>(profile.l) / (c * big_n), 1.0 / std::ldexp(1.0, s));
  const IntervalFunction ones(std::vector<double>(static_cast<std::size_t>(f.length()), 1.0));
  const auto indicator = embed(ones, n_prime);
  const double normalizer = gowers_norm(indicator, s, NormMethod::automatic, budget).value;
  const double assembled = 2.0 * c * (fourier_term + truncation_term);

  std::vector<double> diff(static_cast<std::size_t>(f.length()));
  for (std::int64_t k = 1; k <= f.length(); ++k) diff[static_cast<std::size_t>(k - 1)] = f.at(k) - h.at(k);
  const double measured = interval_norm(IntervalFunction(std::move(diff)), s, n_prime, budget).value;

  const auto ht = H * indicator;
  const auto rhs = (ft - H) * profile.phi + H * (profile.phi - indicator);
  const double identity = (ft - ht - rhs).max_abs();

  return TransferResult{.profile = std::move(profile),
                        .decomposition = std::move(dec),
                        .h = std::move(h),
                        .residual_group = residual,
                        .fourier_term = fourier_term,
                        .truncation_term = truncation_term,
                        .normalizer = normalizer,
                        .assembled_bound = assembled,
                        .measured = measured,
                        .identity_residual = identity,
                        .bound_holds = measured <= assembled + 1e-9};
}

}  // namespace uninorm
