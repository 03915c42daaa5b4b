#include "doctest.h"
#include "helpers.hpp"

#include "uninorm/decompose.hpp"
#include "uninorm/dualsearch.hpp"
#include "uninorm/error.hpp"
#include "uninorm/pseudorandom.hpp"

#include <cmath>

using namespace uninorm;
using testing::random_function;
using testing::random_tensor;
using testing::to_vector;

namespace {

GroupFunction sparse_nu(std::int64_t n, std::uint64_t seed) {
  MajorantSpec spec;
  spec.kind = MajorantKind::sparse_set;
  spec.delta = 0.5;
  spec.seed = seed;
  return generate_majorant(spec, FiniteAbelianGroup::cyclic(n)).nu;
}

void check_range(std::span<const double> v, double lo, double hi) {
  for (double x : v) {
    CHECK(x >= lo);
    CHECK(x <= hi);
  }
}

}  // namespace

TEST_CASE("default_max_iterations") {
  CHECK(default_max_iterations(1.0, 0.05) == 25600);
  CHECK(default_max_iterations(0.0, 1.0) == 16);
  CHECK_THROWS_AS(default_max_iterations(1.0, 0.0), Error);
}

TEST_CASE("dense_model trivial cases") {
  const auto z8 = FiniteAbelianGroup::cyclic(8);
  const auto ones = GroupFunction::constant(z8, 1.0);
  const auto g = random_function(8, 3, 0.0, 1.0);
  const auto r = dense_model(g, ones, 2, 0.05);
  CHECK(r.converged);
  CHECK(r.iterations == 1);
  CHECK(to_vector(r.model.values()) == to_vector(g.values()));
  CHECK(r.residual_cut == 0.0);
  CHECK(*r.residual_norm == 0.0);

  const auto z = dense_model(GroupFunction::zero(z8), ones, 2, 0.05);
  CHECK(z.converged);
  for (double v : z.model.values()) CHECK(v == 0.0);
}

TEST_CASE("dense_model preconditions") {
  const auto z4 = FiniteAbelianGroup::cyclic(4);
  const auto ones = GroupFunction::constant(z4, 1.0);
  try {
    dense_model(GroupFunction::constant(z4, 2.0), ones, 2, 0.1);
    FAIL("expected precondition violation");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::precondition_violation);
  }
  CHECK_THROWS_AS(dense_model(GroupFunction::constant(z4, -0.5), ones, 2, 0.1), Error);
  CHECK_THROWS_AS(dense_model(ones, ones, 2, 0.0), Error);
  CHECK_THROWS_AS(dense_model(ones, GroupFunction::constant(FiniteAbelianGroup::cyclic(5), 1.0), 2, 0.1), Error);
}

TEST_CASE("dense_model on a sparse majorant") {
  const auto nu = sparse_nu(8, 7);
  DecomposeOptions opts;
  opts.max_iterations = 300;
  const auto r = dense_model(nu, nu, 2, 0.05, opts);
  check_range(r.model.values(), 0.0, 1.0);
  CHECK(r.iterations <= opts.max_iterations);
  CHECK(r.trace.size() == static_cast<std::size_t>(r.iterations));
  REQUIRE(r.gap_lower_bound.has_value());
  // the reported gap is the exact dual optimum at the returned model
  const auto check = best_dual(nu - r.model, 2);
  CHECK(check.exact);
  CHECK(std::abs(check.correlation - r.residual_cut) <= 1e-12);
  CHECK(r.residual_cut >= *r.gap_lower_bound - 1e-12);
  CHECK(r.converged == (r.residual_cut <= 0.05));
  for (const auto& rec : r.trace) CHECK(std::abs(rec.correlation) <= average(nu) + 1.0);

  // with a looser target the iteration terminates with a certified gap
  const auto loose = dense_model(nu, nu, 2, 0.5);
  CHECK(loose.converged);
  CHECK(best_dual(nu - loose.model, 2).correlation <= 0.5 + 1e-9);
}

TEST_CASE("dense_model keeps nonnegative inputs nonnegative") {
  for (std::uint64_t seed = 0; seed < 4; ++seed) {
    const auto nu = sparse_nu(6, seed);
    Rng rng(seed);
    const auto g = nu * GroupFunction(nu.group(), rng.uniforms(6, 0.0, 1.0));
    DecomposeOptions opts;
    opts.max_iterations = 60;
    const auto r = dense_model(g, nu, 2, 0.1, opts);
    check_range(r.model.values(), 0.0, 1.0);
  }
}

TEST_CASE("kvn_group") {
  const auto z8 = FiniteAbelianGroup::cyclic(8);
  const auto ones = GroupFunction::constant(z8, 1.0);
  const auto f = random_function(8, 11);
  const auto same = kvn_group(f, ones, 2, 0.05);
  for (Element x = 0; x < 8; ++x) CHECK(same.model[x] == doctest::Approx(f[x]).epsilon(1e-15));
  CHECK(same.residual_cut == doctest::Approx(0.0).scale(1.0));
  CHECK(*same.residual_norm == doctest::Approx(0.0).scale(1.0));
  CHECK(*same.majorant_check);

  const auto nu = sparse_nu(8, 7);
  Rng rng(5);
  const auto b = GroupFunction(z8, rng.uniforms(8, -0.5, 0.5));
  // nu - 1 is not dominated by nu off the support; halve it and use the
  // majorant (nu + 1) / 2 instead
  const auto f2 = ((nu - ones) + b * nu.map([](double v) { return v > 0.0 ? 1.0 : 0.0; })) * 0.5;
  const auto nu2 = (nu + ones) * 0.5;
  CHECK_THROWS_AS(kvn_group(nu - ones, nu, 2, 0.05), Error);
  DecomposeOptions opts;
  opts.max_iterations = 200;
  const auto r = kvn_group(f2, nu2, 2, 0.05, opts);
  check_range(r.model.values(), -1.0, 1.0);
  REQUIRE(r.residual_cut_bound.has_value());
  CHECK(r.residual_cut_exact);
  CHECK(r.residual_cut <= *r.residual_cut_bound + 1e-9);
  CHECK(*r.majorant_check);
  REQUIRE(r.residual_norm.has_value());

  CHECK_THROWS_AS(kvn_group(GroupFunction::constant(z8, 3.0), ones, 2, 0.1), Error);
}

TEST_CASE("kvn_tensor") {
  const auto zero = kvn_tensor(TensorFunction::constant(3, 2, 0.0), TensorFunction::constant(3, 2, 1.0), 0.05);
  for (double v : zero.model.values()) CHECK(v == 0.0);

  const auto F = random_tensor(3, 2, 4);
  const auto same = kvn_tensor(F, TensorFunction::constant(3, 2, 1.0), 0.05);
  CHECK(to_vector(same.model.values()) == to_vector(F.values()));
  CHECK(*same.residual_norm == 0.0);

  MajorantSpec spec;
  spec.kind = MajorantKind::sparse_set;
  spec.delta = 0.5;
  const auto nu = generate_majorant(spec, 3, 2).nu;
  DecomposeOptions opts;
  opts.max_iterations = 200;
  const auto one = TensorFunction::constant(3, 2, 1.0);
  const auto r = kvn_tensor((nu - one) * 0.5, (nu + one) * 0.5, 0.05, opts);
  check_range(r.model.values(), -1.0, 1.0);
  CHECK(r.residual_cut <= *r.residual_cut_bound + 1e-9);
  CHECK(r.residual_cut_exact);

  const auto pos = kvn_tensor(nu * 0.5, nu, 0.05, opts);
  check_range(pos.model.values(), 0.0, 1.0);
}
