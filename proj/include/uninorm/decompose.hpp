#pragma once

#include "uninorm/group.hpp"
#include "uninorm/tensor.hpp"
#include "uninorm/uniformity.hpp"

#include <optional>
#include <vector>

namespace uninorm {

struct IterationRecord {
  int step = 0;
  /// Dual correlation <input - model, D> measured at this step.
  double correlation = 0.0;
  /// Step size used for the update (0 on the terminating step).
  double step_size = 0.0;
};

template <class Function>
struct Decomposition {
  /// w in [0,1] (dense model) or h in [-1,1] (KvN).
  Function model;
  /// Dual correlation of input - model at the returned model.
  double residual_cut = 0.0;
  /// True when residual_cut came from exhaustive searches only.
  bool residual_cut_exact = false;
  /// ||input - model|| in U^s (groups) or the box norm (tensors).
  std::optional<double> residual_norm;
  bool converged = false;
  int iterations = 0;
  int max_iterations = 0;
  std::vector<IterationRecord> trace;
  /// Dense-model runs: no [0,1]-valued model has a smaller dual gap.
  std::optional<double> gap_lower_bound;
  /// KvN runs: sum of the two halves' gaps (bounds residual_cut when both
  /// are exact).
  std::optional<double> residual_cut_bound;
  /// KvN runs: |input - model| / 2 <= (nu + 1) / 2 pointwise.
  std::optional<bool> majorant_check;
};

struct DecomposeOptions {
  SearchOptions search;
  /// 0 selects ceil(16 (1 + E[nu])^2 / eps^2).
  int max_iterations = 0;
  bool measure_residual_norm = true;
};

int default_max_iterations(double mean_nu, double epsilon);

/// Projected dual-ascent dense model: w in [0,1] with
/// sup_D |E[(g - w) D]| <= epsilon on success.
Decomposition<GroupFunction> dense_model(const GroupFunction& g, const GroupFunction& nu, int s, double epsilon,
                                         const DecomposeOptions& options = {});

Decomposition<TensorFunction> dense_model(const TensorFunction& g, const TensorFunction& nu, double epsilon,
                                          const DecomposeOptions& options = {});

/// h = w_+ - w_- from dense models of max(f, 0) and max(-f, 0).
Decomposition<GroupFunction> kvn_group(const GroupFunction& f, const GroupFunction& nu, int s, double epsilon,
                                       const DecomposeOptions& options = {});

Decomposition<TensorFunction> kvn_tensor(const TensorFunction& F, const TensorFunction& nu, double epsilon,
                                         const DecomposeOptions& options = {});

}  // namespace uninorm
