#include "doctest.h"
#include "helpers.hpp"
#include "oracles.hpp"

#include "uninorm/boxnorms.hpp"
#include "uninorm/error.hpp"
#include "uninorm/reference.hpp"
#include "uninorm/uniformity.hpp"

#include <cmath>

using namespace uninorm;
using testing::random_function;
using testing::rel_close;
using testing::to_vector;

namespace {

GroupFunction delta0(std::int64_t n) {
  const std::vector<Element> zero{0};
  return GroupFunction::indicator(FiniteAbelianGroup::cyclic(n), zero);
}

}  // namespace

TEST_CASE("gowers_norm examples") {
  const auto z8 = FiniteAbelianGroup::cyclic(8);
  CHECK(gowers_norm(GroupFunction::constant(z8, 1.0), 2).value == doctest::Approx(1.0));
  for (int s : {2, 3, 4}) {
    CHECK(gowers_norm(GroupFunction::zero(z8), s).value == 0.0);
    CHECK(gowers_norm(GroupFunction::zero(z8), s, NormMethod::direct_enumeration).value == 0.0);
  }
  // one of the 64 terms is nonzero
  const double expected = oracle::gowers_norm(to_vector(delta0(4).values()), 2);
  CHECK(expected == doctest::Approx(std::pow(4.0, -0.75)).epsilon(1e-14));
  for (auto method : {NormMethod::automatic, NormMethod::direct_enumeration, NormMethod::recursive_derivative,
                      NormMethod::fourier_fast_path, NormMethod::lifted_tensor}) {
    const auto r = gowers_norm(delta0(4), 2, method);
    CHECK(r.value == doctest::Approx(expected).epsilon(1e-12));
    CHECK(r.cost > 0);
  }
}

TEST_CASE("gowers_norm reports the method used") {
  const auto f = random_function(6, 1);
  CHECK(gowers_norm(f, 2).method == NormMethod::fourier_fast_path);
  CHECK(gowers_norm(f, 3).method == NormMethod::recursive_derivative);
  CHECK(gowers_norm(f, 3, NormMethod::direct_enumeration).method == NormMethod::direct_enumeration);
  CHECK(gowers_norm(f, 2, NormMethod::lifted_tensor).method == NormMethod::lifted_tensor);
}

TEST_CASE("gowers_norm errors") {
  const auto f = random_function(6, 1);
  CHECK_THROWS_AS(gowers_norm(f, 1), Error);
  CHECK_THROWS_AS(gowers_norm_recursive(f, 0), Error);
  CHECK_THROWS_AS(gowers_norm(f, 3, NormMethod::fourier_fast_path), Error);
  try {
    gowers_norm(random_function(1000, 2), 3, NormMethod::direct_enumeration);
    FAIL("expected budget error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::budget_exceeded);
  }
  Budget tight;
  tight.enumeration = 100;
  CHECK_THROWS_AS(gowers_norm(f, 3, NormMethod::direct_enumeration, tight), Error);
}

TEST_CASE("U^2 Fourier path examples") {
  CHECK(gowers_norm_u2_fourier(GroupFunction::constant(FiniteAbelianGroup::cyclic(16), 1.0)).value ==
        doctest::Approx(1.0));
  CHECK(gowers_norm_u2_fourier(delta0(4)).value == doctest::Approx(std::pow(4.0, -0.75)).epsilon(1e-12));
  const auto alt = GroupFunction::from(FiniteAbelianGroup::cyclic(8), [](Element x) { return x % 2 ? -1.0 : 1.0; });
  CHECK(oracle::gowers_norm(to_vector(alt.values()), 2) == doctest::Approx(1.0));
  CHECK(gowers_norm_u2_fourier(alt).value == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("recursive path examples") {
  for (int s : {2, 3, 4}) {
    CHECK(gowers_norm_recursive(GroupFunction::constant(FiniteAbelianGroup::cyclic(5), 1.0), s).value ==
          doctest::Approx(1.0));
  }
  const double d3 = oracle::gowers_norm(to_vector(delta0(4).values()), 3);
  CHECK(gowers_norm_recursive(delta0(4), 3).value == doctest::Approx(d3).epsilon(1e-12));
  const auto f = random_function(6, 42);
  const double want = oracle::gowers_norm(to_vector(f.values()), 3);
  CHECK(rel_close(gowers_norm_recursive(f, 3).value, want, 1e-9));
  CHECK(rel_close(gowers_norm_recursive(f, 3, RecursionBase::autocorrelation).value, want, 1e-9));
}

TEST_CASE("all U^s paths agree with the oracle on cyclic and product groups") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    for (std::int64_t n : {3, 4, 5, 6}) {
      const auto f = random_function(n, seed * 31 + static_cast<std::uint64_t>(n));
      for (int s : {2, 3}) {
        const double want = oracle::gowers_norm(to_vector(f.values()), s);
        CHECK(rel_close(gowers_norm_direct(f, s).value, want, 1e-9));
        CHECK(rel_close(gowers_norm_recursive(f, s).value, want, 1e-9));
        CHECK(rel_close(gowers_norm_recursive(f, s, RecursionBase::autocorrelation).value, want, 1e-9));
        CHECK(rel_close(gowers_norm(f, s, NormMethod::lifted_tensor).value, want, 1e-9));
      }
    }
  }
  Rng rng(3);
  const FiniteAbelianGroup g({2, 3});
  const GroupFunction f(g, rng.uniforms(6, -1, 1));
  const double power = reference::gowers_power(f, 3);
  CHECK(rel_close(gowers_norm_direct(f, 3).value, std::pow(power, 1.0 / 8.0), 1e-9));
  CHECK(rel_close(gowers_norm_recursive(f, 3).value, std::pow(power, 1.0 / 8.0), 1e-9));
}

TEST_CASE("cube_correlation and cube_marginal") {
  const auto z5 = FiniteAbelianGroup::cyclic(5);
  const auto one = GroupFunction::constant(z5, 1.0);
  std::vector<GroupFunction> ones(4, one);
  CHECK(cube_correlation(ones) == doctest::Approx(1.0));
  auto with_zero = ones;
  with_zero[2] = GroupFunction::zero(z5);
  CHECK(cube_correlation(with_zero) == 0.0);

  const auto f = random_function(5, 11);
  for (int s : {2, 3}) {
    std::vector<GroupFunction> same(std::size_t{1} << s, f);
    CHECK(rel_close(cube_correlation(same), oracle::gowers_power(to_vector(f.values()), s), 1e-12));
  }

  std::vector<GroupFunction> three(3, one);
  const auto m1 = cube_marginal(three);
  for (double v : m1.values()) CHECK(v == doctest::Approx(1.0));
  std::vector<GroupFunction> zeros(3, GroupFunction::zero(z5));
  const auto m0 = cube_marginal(zeros);
  for (double v : m0.values()) CHECK(v == 0.0);

  // E[f * marginal] = correlation, and the marginal matches the reference
  std::vector<GroupFunction> fam;
  for (int m = 0; m < 7; ++m) fam.push_back(random_function(5, 100 + static_cast<std::uint64_t>(m)));
  const auto marg = cube_marginal(fam);
  const auto ref = reference::cube_marginal(fam);
  for (std::size_t x = 0; x < ref.size(); ++x) CHECK(std::abs(marg.values()[x] - ref[x]) < 1e-12);
  std::vector<GroupFunction> full{f};
  full.insert(full.end(), fam.begin(), fam.end());
  CHECK(std::abs(average(f * marg) - cube_correlation(full)) < 1e-10);

  std::vector<GroupFunction> bad{one, one, GroupFunction::constant(FiniteAbelianGroup::cyclic(4), 1.0)};
  CHECK_THROWS_AS(cube_marginal(bad), Error);
  std::vector<GroupFunction> wrong_size(5, one);
  CHECK_THROWS_AS(cube_correlation(wrong_size), Error);
}

TEST_CASE("moment_estimate") {
  const auto z8 = FiniteAbelianGroup::cyclic(8);
  const std::vector<Element> evens{0, 2, 4, 6};
  for (int k : {1, 2}) {
    CHECK(moment_estimate(GroupFunction::constant(z8, 1.0), 2, evens, k) == doctest::Approx(0.0));
    CHECK(moment_estimate(random_function(8, 3, 0.0, 2.0), 2, std::vector<Element>{}, k) == 0.0);
  }
  CHECK_THROWS_AS(moment_estimate(random_function(8, 3, -1.0, 1.0), 2, evens, 1), Error);
  CHECK_THROWS_AS(moment_estimate(GroupFunction::constant(z8, 1.0), 2, evens, 3), Error);

  // direct enumeration of the calibration function
  const auto nu = random_function(8, 5, 0.0, 2.0);
  const auto marginal = majorant_marginal(nu, 2);
  const auto v = to_vector(nu.values());
  double lhs = 0.0;
  for (long x = 0; x < 8; x += 2) {
    double acc = 0.0;
    for (long a = 0; a < 8; ++a)
      for (long b = 0; b < 8; ++b) acc += v[static_cast<std::size_t>((x + a) % 8)] * v[static_cast<std::size_t>((x + b) % 8)] * v[static_cast<std::size_t>((x + a + b) % 8)];
    acc /= 64.0;
    CHECK(marginal[x] == doctest::Approx(acc).epsilon(1e-12));
    lhs += acc * acc;
  }
  CHECK(moment_estimate(nu, 2, evens, 2) == doctest::Approx(std::abs(lhs / 8.0 - 0.5)).epsilon(1e-12));
}

TEST_CASE("weak_norm examples") {
  const auto z4 = FiniteAbelianGroup::cyclic(4);
  const auto one = weak_norm(GroupFunction::constant(z4, 1.0), 2);
  CHECK(one.lower_bound == doctest::Approx(1.0));
  CHECK(one.exact);
  for (const auto& h : one.group_members)
    for (double v : h.values()) CHECK(v == 1.0);
  CHECK(weak_norm(GroupFunction::zero(z4), 2).lower_bound == 0.0);

  const auto f = delta0(4) - GroupFunction::constant(z4, 0.25);
  const double want = oracle::weak_norm(to_vector(f.values()), 2);
  const auto ex = weak_norm(f, 2);
  CHECK(ex.lower_bound == doctest::Approx(want).epsilon(1e-12));
  SearchOptions alt;
  alt.mode = SearchMode::alternating;
  const auto al = weak_norm(f, 2, alt);
  CHECK_FALSE(al.exact);
  CHECK(al.lower_bound == doctest::Approx(want).epsilon(1e-12));
}

TEST_CASE("weak_norm witness reproduces the value") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto f = random_function(5, seed);
    for (auto mode : {SearchMode::exhaustive, SearchMode::alternating}) {
      SearchOptions o;
      o.mode = mode;
      const auto est = weak_norm(f, 2, o);
      CHECK(std::abs(weak_objective(f, est.group_members) - est.lower_bound) <= 1e-12);
      CHECK(std::abs(cut_objective(lift_to_tensor(f, 2), est.witness) - est.lower_bound) <= 1e-12);
      for (const auto& h : est.group_members)
        for (double v : h.values()) CHECK(std::abs(v) == 1.0);
    }
    const double want = oracle::weak_norm(to_vector(f.values()), 2);
    CHECK(weak_norm(f, 2).lower_bound == doctest::Approx(want).epsilon(1e-12));
  }
}

TEST_CASE("weak_norm budget") {
  try {
    weak_norm(random_function(9, 1), 2);
    FAIL("expected budget error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::budget_exceeded);
  }
  SearchOptions alt;
  alt.mode = SearchMode::alternating;
  alt.restarts = 4;
  CHECK(weak_norm(random_function(9, 1), 2, alt).lower_bound > 0.0);
  CHECK_THROWS_AS(weak_norm(random_function(4, 1), 1), Error);
}

TEST_CASE("alternating search is deterministic for a seed") {
  SearchOptions alt;
  alt.mode = SearchMode::alternating;
  const auto f = random_function(7, 3);
  const auto a = weak_norm(f, 2, alt);
  const auto b = weak_norm(f, 2, alt);
  CHECK(a.lower_bound == b.lower_bound);
  CHECK(a.evaluations == b.evaluations);
}

TEST_CASE("additive_cut_norm") {
  const auto z3 = FiniteAbelianGroup::cyclic(3);
  CHECK(additive_cut_norm(GroupFunction::constant(z3, 1.0), 2).lower_bound == doctest::Approx(1.0));
  CHECK(additive_cut_norm(GroupFunction::zero(z3), 2).lower_bound == 0.0);
  const auto f = delta0(3) - GroupFunction::constant(z3, 1.0 / 3.0);
  const double want = oracle::cut_norm_s2(oracle::lift(to_vector(f.values()), 2), 3);
  const auto est = additive_cut_norm(f, 2);
  CHECK(est.exact);
  CHECK(est.lower_bound == doctest::Approx(want).epsilon(1e-12));
  CHECK(est.lower_bound >= weak_norm(f, 2).lower_bound - 1e-9);
}

TEST_CASE("uniformity_norm_ell") {
  const auto z4 = FiniteAbelianGroup::cyclic(4);
  for (int s : {2, 3})
    for (int ell : {2, 4}) CHECK(uniformity_norm_ell(GroupFunction::constant(z4, 1.0), s, ell).value == doctest::Approx(1.0));
  const auto f = random_function(5, 77);
  CHECK(rel_close(uniformity_norm_ell(f, 2, 2).value, oracle::gowers_norm(to_vector(f.values()), 2), 1e-9));
  const auto d = delta0(3);
  const double want = oracle::box_norm(oracle::lift(to_vector(d.values()), 2), 3, 2, 4);
  CHECK(rel_close(uniformity_norm_ell(d, 2, 4).value, want, 1e-9));
  CHECK_THROWS_AS(uniformity_norm_ell(f, 2, 3), Error);
}

TEST_CASE("method and mode names round-trip") {
  for (auto m : {NormMethod::automatic, NormMethod::direct_enumeration, NormMethod::recursive_derivative,
                 NormMethod::fourier_fast_path, NormMethod::lifted_tensor, NormMethod::tensor_contraction}) {
    CHECK(parse_norm_method(to_string(m)) == m);
  }
  CHECK(parse_norm_method("direct") == NormMethod::direct_enumeration);
  CHECK(parse_search_mode("alternating") == SearchMode::alternating);
  CHECK_THROWS_AS(parse_search_mode("greedy"), Error);
}
