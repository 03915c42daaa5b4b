#pragma once

#include "uninorm/group.hpp"
#include "uninorm/tensor.hpp"
#include "uninorm/uniformity.hpp"

#include <span>

namespace uninorm {

/// D(z) = E[prod_{omega != 1^s} H_omega(pi_omega(x)) | sum_i x_{i1} = z]
/// together with the family that generates it.
struct DualFunction {
  DualFamily family;
  GroupFunction realized;
};

/// Builds D from a family whose vertex set is the group (vertex v is the
/// element with code v).
DualFunction realize_dual(const DualFamily& family, const FiniteAbelianGroup& group, int s);

/// z -> E_{u in Z^s : u_1 + ... + u_s = z} K(u).
GroupFunction push_forward(const TensorFunction& K, const FiniteAbelianGroup& group);

struct DualSearchResult {
  DualFunction dual;
  /// <residual, D> (nonnegative: the search is symmetric under sign).
  double correlation = 0.0;
  bool exact = false;
};

/// Dual witness maximizing |<residual, D>| through the additive cut norm.
DualSearchResult best_dual(const GroupFunction& residual, int s, const SearchOptions& options = {});

/// Inner product E[f g].
double inner(const GroupFunction& f, const GroupFunction& g);

}  // namespace uninorm
