#pragma once

#include "uninorm/budget.hpp"
#include "uninorm/group.hpp"
#include "uninorm/tensor.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace uninorm {

enum class MajorantKind { constant_one, perturbed, sparse_set, custom };

std::string_view to_string(MajorantKind kind);
MajorantKind parse_majorant_kind(std::string_view name);

struct MajorantSpec {
  MajorantKind kind = MajorantKind::constant_one;
  /// Perturbation size for `perturbed`: nu = 1 + epsilon * r, r = +-1.
  double epsilon = 0.0;
  /// Target density for `sparse_set`; |S| = round(delta |domain|), at least 1.
  double delta = 1.0;
  std::uint64_t seed = 7;
  /// Values for `custom`, in domain order.
  std::vector<double> values;
};

template <class Function>
struct GeneratedMajorant {
  Function nu;
  /// Points where the raw value was negative and was clipped to 0.
  std::size_t clipped = 0;
};

GeneratedMajorant<GroupFunction> generate_majorant(const MajorantSpec& spec, const FiniteAbelianGroup& group);
GeneratedMajorant<TensorFunction> generate_majorant(const MajorantSpec& spec, std::int64_t vertex_count,
                                                    int arity);

/// 1 + theta (nu - 1): interpolates between the constant majorant and nu
/// while keeping the mean and nonnegativity (theta in [0, 1]).
GroupFunction mix_majorant(const GroupFunction& nu, double theta);
TensorFunction mix_majorant(const TensorFunction& nu, double theta);

/// Conjugate exponent q of p (q = 1 for p = inf).
double conjugate_exponent(double p);

/// ell = min{2n : 2n >= 2q} for groups and min{2n : 2n >= 2q + 2} for
/// tensors.
int group_ell(double p);
int tensor_ell(double p);

template <class Function>
struct PsiReference {
  Function psi;
  double p = 0.0;
  double q = 0.0;
  int ell = 0;
};

/// Reference psi with derived q and ell; checks ||psi||_p <= 1 (within
/// 1e-12).
PsiReference<GroupFunction> make_psi(GroupFunction psi, double p);
PsiReference<TensorFunction> make_psi(TensorFunction psi, double p);

struct MajorantCertificate {
  /// ||nu - 1||_{U^{2s}}
  std::optional<double> u2s_dev;
  /// ||nu - 1||_{U^s}
  std::optional<double> us_dev;
  /// ||nu - 1||_{U^s_4} of the lifted tensor
  std::optional<double> us4_dev;
  /// ||nu - psi||_{U^{ell s}} (group) or ||nu - psi||_{box_ell} (tensor)
  std::optional<double> psi_dev;
  /// ||nu - 1||_{box_4}
  std::optional<double> box4_dev;
  /// ||nu - 1||_{box}
  std::optional<double> box_dev;
  double mean = 0.0;
  int s = 0;
  /// Why an entry is missing, keyed by deviation name.
  std::vector<std::pair<std::string, std::string>> unavailable;

  /// (name, value) for every deviation in a fixed order.
  std::vector<std::pair<std::string, std::optional<double>>> deviations() const;
};

MajorantCertificate certify(const GroupFunction& nu, int s,
                            const std::optional<PsiReference<GroupFunction>>& psi = std::nullopt,
                            const Budget& budget = kDefaultBudget);

MajorantCertificate certify(const TensorFunction& nu,
                            const std::optional<PsiReference<TensorFunction>>& psi = std::nullopt,
                            const Budget& budget = kDefaultBudget);

}  // namespace uninorm
