#pragma once

// Serial, definition-level implementations. They enumerate the defining
// averages term by term and are only meant for small inputs: tests use
// them as oracles and the benchmark compares them with the fast kernels.

#include "uninorm/group.hpp"
#include "uninorm/tensor.hpp"

#include <complex>
#include <span>
#include <vector>

namespace uninorm::reference {

/// E_{x,h} prod_{omega in {0,1}^s} f(x + omega.h).
double gowers_power(const GroupFunction& f, int s);

/// E_{x in V^{s x ell}} prod_{omega in [ell]^s} F(pi_omega(x)).
double box_power(const TensorFunction& F, int ell);

/// Same with one tensor per vertex omega (code sum_i (omega_i - 1) ell^i).
double box_correlation(std::span<const TensorFunction> Fs, int ell);

/// x -> E_h prod_{m != 0} fs[m-1](x + m.h).
std::vector<double> cube_marginal(std::span<const GroupFunction> fs);

/// Supremum of the weak-norm objective over all +-1 families.
double weak_norm(const GroupFunction& f, int s);

/// Supremum of the cut objective over all +-1 families (every member
/// enumerated; no factoring).
double cut_norm(const TensorFunction& F);

/// D(z) = E[prod_{m != 0} H_m(pi_m(x)) | sum_i x_{i1} = z] by enumerating
/// x in Z^{s x 2}.
std::vector<double> realize_dual(const DualFamily& family, const FiniteAbelianGroup& group);

/// hat f(xi) = E_x f(x) e(-x.xi), O(|Z|^2).
std::vector<std::complex<double>> fourier(const GroupFunction& f);

}  // namespace uninorm::reference
