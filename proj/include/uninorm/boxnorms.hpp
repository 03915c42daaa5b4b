#pragma once

#include "uninorm/budget.hpp"
#include "uninorm/group.hpp"
#include "uninorm/tensor.hpp"
#include "uninorm/uniformity.hpp"

#include <span>
#include <vector>

namespace uninorm {

/// T(x_1, ..., x_s) = f(x_1 + ... + x_s) on Z^s (vertex v is element v).
TensorFunction lift_to_tensor(const GroupFunction& f, int s, const Budget& budget = kDefaultBudget);

/// ||F||_{box_ell(V^s)} by folding the last coordinate:
/// ||F||^{ell^s} = E_{x'} K(x')^ell with K(x') = E_b prod_{omega'} F(x'_{omega'}, b).
NormResult box_norm_ell(const TensorFunction& F, int ell, const Budget& budget = kDefaultBudget);

NormResult box_norm(const TensorFunction& F, const Budget& budget = kDefaultBudget);

/// E_{x in V^{s x ell}} prod_omega F_omega(pi_omega(x)). Fs[c] sits at the
/// vertex omega with c = sum_i (omega_i - 1) ell^i, so Fs.size() == ell^s.
double multi_box_correlation(std::span<const TensorFunction> Fs, int ell,
                             const Budget& budget = kDefaultBudget);

/// Cut objective of F against a family (F at 1^s, H_m elsewhere).
double cut_objective(const TensorFunction& F, const DualFamily& family);

/// ||F||_{cut(V^s)}. The supremum is taken over factored families
/// G_0, ..., G_{s-1} with G_i independent of coordinate i; this has the same
/// value as the supremum over full families.
WeakNormEstimate cut_norm(const TensorFunction& F, const SearchOptions& options = {});

/// E_u F(u) prod_i G_i(u_{-i}).
double factored_objective(const TensorFunction& F, std::span<const TensorFunction> factors);

/// u -> prod_i G_i(u_{-i}) as a tensor on V^s.
TensorFunction factor_product(std::span<const TensorFunction> factors);

/// Family with H_{1<<i}(z) = G_i(z_{-i}) and every other member 1.
DualFamily family_from_factors(std::span<const TensorFunction> factors);

/// K(u) = E_y prod_{m != 0} H_m(pi_m(u, y)), so that
/// cut_objective(F, family) = E_u F(u) K(u).
TensorFunction cut_dual_kernel(const DualFamily& family);

}  // namespace uninorm
