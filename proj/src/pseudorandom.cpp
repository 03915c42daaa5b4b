#include "uninorm/pseudorandom.hpp"

#include "uninorm/boxnorms.hpp"
#include "uninorm/error.hpp"
#include "uninorm/random.hpp"
#include "uninorm/uniformity.hpp"

#include <cmath>
#include <functional>
#include <limits>
#include <string>

namespace uninorm {

std::string_view to_string(MajorantKind kind) {
  switch (kind) {
    case MajorantKind::constant_one: return "constant-one";
    case MajorantKind::perturbed: return "perturbed";
    case MajorantKind::sparse_set: return "sparse-set";
    case MajorantKind::custom: return "custom";
  }
  return "unknown";
}

MajorantKind parse_majorant_kind(std::string_view name) {
  if (name == "constant-one" || name == "constant" || name == "one") return MajorantKind::constant_one;
  if (name == "perturbed") return MajorantKind::perturbed;
  if (name == "sparse-set" || name == "sparse") return MajorantKind::sparse_set;
  if (name == "custom") return MajorantKind::custom;
  throw Error(ErrorKind::invalid_parameter, "unknown majorant kind '" + std::string(name) + "'");
}

namespace {

std::vector<double> majorant_values(const MajorantSpec& spec, std::size_t size, std::size_t& clipped) {
  clipped = 0;
  switch (spec.kind) {
    case MajorantKind::constant_one:
      return std::vector<double>(size, 1.0);
    case MajorantKind::perturbed: {
      if (!std::isfinite(spec.epsilon) || spec.epsilon < 0.0) {
        throw Error(ErrorKind::invalid_parameter, "perturbation epsilon must be >= 0");
      }
      Rng rng(spec.seed);
      std::vector<double> v(size);
      for (auto& x : v) {
        x = 1.0 + spec.epsilon * rng.sign();
        if (x < 0.0) {
          x = 0.0;
          ++clipped;
        }
      }
      return v;
    }
    case MajorantKind::sparse_set: {
      if (!(spec.delta > 0.0 && spec.delta <= 1.0)) {
        throw Error(ErrorKind::invalid_parameter, "density delta must lie in (0, 1]");
      }
      const auto n = static_cast<std::int64_t>(size);
      const auto count = std::max<std::int64_t>(1, std::llround(spec.delta * static_cast<double>(n)));
      Rng rng(spec.seed);
      const auto set = rng.subset(n, std::min(count, n));
      // Normalized by the true density so that E[nu] = 1 exactly.
      const double height = static_cast<double>(n) / static_cast<double>(set.size());
      std::vector<double> v(size, 0.0);
      for (auto a : set) v[static_cast<std::size_t>(a)] = height;
      return v;
    }
    case MajorantKind::custom: {
      if (spec.values.size() != size) {
        throw Error(ErrorKind::invalid_input, "custom majorant has " + std::to_string(spec.values.size()) +
                                                  " values, domain has " + std::to_string(size));
      }
      for (double x : spec.values) {
        if (!std::isfinite(x) || x < 0.0) throw Error(ErrorKind::invalid_majorant, "custom majorant must be >= 0");
      }
      return spec.values;
    }
  }
  throw Error(ErrorKind::invalid_parameter, "unknown majorant kind");
}

void require_theta(double theta) {
  if (!(theta >= 0.0 && theta <= 1.0)) throw Error(ErrorKind::invalid_parameter, "theta must lie in [0, 1]");
}

}  // namespace

GeneratedMajorant<GroupFunction> generate_majorant(const MajorantSpec& spec, const FiniteAbelianGroup& group) {
  std::size_t clipped = 0;
  auto v = majorant_values(spec, static_cast<std::size_t>(group.order()), clipped);
  return {GroupFunction(group, std::move(v)), clipped};
}

GeneratedMajorant<TensorFunction> generate_majorant(const MajorantSpec& spec, std::int64_t vertex_count,
                                                    int arity) {
  const auto size = checked_pow(static_cast<std::uint64_t>(vertex_count), static_cast<std::uint64_t>(arity));
  std::size_t clipped = 0;
  auto v = majorant_values(spec, static_cast<std::size_t>(size), clipped);
  return {TensorFunction(vertex_count, arity, std::move(v)), clipped};
}

GroupFunction mix_majorant(const GroupFunction& nu, double theta) {
  require_theta(theta);
  return nu.map([theta](double x) { return 1.0 + theta * (x - 1.0); });
}

TensorFunction mix_majorant(const TensorFunction& nu, double theta) {
  require_theta(theta);
  return nu.map([theta](double x) { return 1.0 + theta * (x - 1.0); });
}

double conjugate_exponent(double p) {
  if (!(p > 1.0)) throw Error(ErrorKind::invalid_parameter, "p must be > 1");
  if (std::isinf(p)) return 1.0;
  return p / (p - 1.0);
}

namespace {

int least_even_at_least(double bound) {
  // Small slack so that q = 2 (p = 2) does not round up to 6.
  int n = static_cast<int>(std::ceil(bound / 2.0 - 1e-12));
  return 2 * std::max(n, 1);
}

}  // namespace

int group_ell(double p) { return least_even_at_least(2.0 * conjugate_exponent(p)); }
int tensor_ell(double p) { return least_even_at_least(2.0 * conjugate_exponent(p) + 2.0); }

namespace {

template <class Function>
PsiReference<Function> build_psi(Function psi, double p, int ell) {
  const double norm = lp_norm(psi.values(), p);
  if (norm > 1.0 + 1e-12) {
    throw Error(ErrorKind::invalid_input, "reference psi has L_p norm " + std::to_string(norm) + " > 1");
  }
  return {std::move(psi), p, conjugate_exponent(p), ell};
}

void measure(MajorantCertificate& cert, std::optional<double>& slot, const std::string& name,
             const std::function<double()>& fn) {
  try {
    slot = fn();
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::budget_exceeded) throw;
    cert.unavailable.emplace_back(name, e.what());
  }
}

}  // namespace

PsiReference<GroupFunction> make_psi(GroupFunction psi, double p) {
  const int ell = group_ell(p);
  return build_psi(std::move(psi), p, ell);
}

PsiReference<TensorFunction> make_psi(TensorFunction psi, double p) {
  const int ell = tensor_ell(p);
  return build_psi(std::move(psi), p, ell);
}

std::vector<std::pair<std::string, std::optional<double>>> MajorantCertificate::deviations() const {
  return {{"u2s_dev", u2s_dev}, {"us_dev", us_dev},   {"us4_dev", us4_dev},
          {"psi_dev", psi_dev}, {"box4_dev", box4_dev}, {"box_dev", box_dev}};
}

MajorantCertificate certify(const GroupFunction& nu, int s, const std::optional<PsiReference<GroupFunction>>& psi,
                            const Budget& budget) {
  if (s < 2) throw Error(ErrorKind::invalid_parameter, "s must be >= 2");
  MajorantCertificate cert;
  cert.s = s;
  cert.mean = average(nu);
  const auto deviation = nu - GroupFunction::constant(nu.group(), 1.0);
  measure(cert, cert.u2s_dev, "u2s_dev", [&] { return gowers_norm(deviation, 2 * s, NormMethod::automatic, budget).value; });
  measure(cert, cert.us_dev, "us_dev", [&] { return gowers_norm(deviation, s, NormMethod::automatic, budget).value; });
  measure(cert, cert.us4_dev, "us4_dev", [&] { return uniformity_norm_ell(deviation, s, 4, budget).value; });
  if (psi) {
    measure(cert, cert.psi_dev, "psi_dev", [&] {
      return gowers_norm(nu - psi->psi, psi->ell * s, NormMethod::automatic, budget).value;
    });
  }
  return cert;
}

MajorantCertificate certify(const TensorFunction& nu, const std::optional<PsiReference<TensorFunction>>& psi,
                            const Budget& budget) {
  MajorantCertificate cert;
  cert.s = nu.arity();
  cert.mean = average(nu);
  const auto deviation = nu - TensorFunction::constant(nu.vertex_count(), nu.arity(), 1.0);
  measure(cert, cert.box_dev, "box_dev", [&] { return box_norm(deviation, budget).value; });
  measure(cert, cert.box4_dev, "box4_dev", [&] { return box_norm_ell(deviation, 4, budget).value; });
  if (psi) {
    measure(cert, cert.psi_dev, "psi_dev", [&] { return box_norm_ell(nu - psi->psi, psi->ell, budget).value; });
  }
  return cert;
}

}  // namespace uninorm
