#include "uninorm/dualsearch.hpp"

#include "uninorm/boxnorms.hpp"
#include "uninorm/error.hpp"
#include "uninorm/summation.hpp"

#include <string>

namespace uninorm {

GroupFunction push_forward(const TensorFunction& K, const FiniteAbelianGroup& group) {
  const std::int64_t n = group.order();
  if (K.vertex_count() != n) throw Error(ErrorKind::invalid_input, "tensor vertex count differs from group order");
  const int s = K.arity();
  // sums[flat] = u_1 + ... + u_s, built one coordinate at a time.
  std::vector<std::int64_t> sums(static_cast<std::size_t>(n));
  for (std::int64_t a = 0; a < n; ++a) sums[static_cast<std::size_t>(a)] = a;
  for (int level = 1; level < s; ++level) {
    std::vector<std::int64_t> next(sums.size() * static_cast<std::size_t>(n));
    for (std::size_t p = 0; p < sums.size(); ++p) {
      for (std::int64_t l = 0; l < n; ++l) {
        next[p * static_cast<std::size_t>(n) + static_cast<std::size_t>(l)] = group.add(sums[p], l);
      }
    }
    sums = std::move(next);
  }
  std::vector<PairwiseAccumulator> buckets(static_cast<std::size_t>(n));
  for (std::size_t flat = 0; flat < sums.size(); ++flat) buckets[static_cast<std::size_t>(sums[flat])].add(K[flat]);
  std::vector<double> out(static_cast<std::size_t>(n));
  for (std::size_t z = 0; z < out.size(); ++z) {
    out[z] = buckets[z].count() == 0 ? 0.0 : buckets[z].sum() / static_cast<double>(buckets[z].count());
  }
  return GroupFunction(group, std::move(out));
}

DualFunction realize_dual(const DualFamily& family, const FiniteAbelianGroup& group, int s) {
  if (family.arity() != s) {
    throw Error(ErrorKind::invalid_input, "family arity " + std::to_string(family.arity()) + " differs from s = " +
                                              std::to_string(s));
  }
  if (family.vertex_count() != group.order()) {
    throw Error(ErrorKind::invalid_input, "family vertex set differs from the group");
  }
  return {family, push_forward(cut_dual_kernel(family), group)};
}

double inner(const GroupFunction& f, const GroupFunction& g) { return average(f * g); }

DualSearchResult best_dual(const GroupFunction& residual, int s, const SearchOptions& options) {
  auto estimate = additive_cut_norm(residual, s, options);
  // The factored witness gives K(u) = prod_i G_i(u_{-i}) without the
  // general kernel contraction.
  auto realized = push_forward(factor_product(estimate.factors), residual.group());
  const double correlation = inner(residual, realized);
  return {DualFunction{std::move(estimate.witness), std::move(realized)}, correlation, estimate.exact};
}

}  // namespace uninorm
