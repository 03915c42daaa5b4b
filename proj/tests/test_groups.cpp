#include "doctest.h"
#include "helpers.hpp"

#include "uninorm/error.hpp"
#include "uninorm/group.hpp"
#include "uninorm/random.hpp"
#include "uninorm/summation.hpp"

#include <cmath>
#include <limits>

using namespace uninorm;

TEST_CASE("group_add on cyclic and product groups") {
  const auto z8 = FiniteAbelianGroup::cyclic(8);
  CHECK(group_add(z8, 3, 7) == 2);

  const FiniteAbelianGroup z4z2({4, 2});
  const std::vector<std::int64_t> a{3, 1}, b{1, 1};
  const auto sum = group_add(z4z2, z4z2.encode(a), z4z2.encode(b));
  CHECK(z4z2.decode(sum) == std::vector<std::int64_t>{0, 0});
  CHECK(sum == 0);

  for (Element x = 0; x < z4z2.order(); ++x) CHECK(group_add(z4z2, x, 0) == x);
}

TEST_CASE("group_add rejects out-of-range codes") {
  const auto z8 = FiniteAbelianGroup::cyclic(8);
  CHECK_THROWS_AS(group_add(z8, 8, 0), Error);
  try {
    group_add(z8, -1, 2);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::invalid_element);
  }
}

TEST_CASE("group construction") {
  CHECK(FiniteAbelianGroup({}).order() == 1);
  CHECK(FiniteAbelianGroup({3, 5, 2}).order() == 30);
  CHECK_THROWS_AS(FiniteAbelianGroup({3, 0}), Error);
  const FiniteAbelianGroup g({3, 4});
  // mixed radix, last factor fastest
  CHECK(g.encode(std::vector<std::int64_t>{1, 0}) == 4);
  CHECK(g.encode(std::vector<std::int64_t>{0, 1}) == 1);
  CHECK(g.encode(std::vector<std::int64_t>{-1, 5}) == g.encode(std::vector<std::int64_t>{2, 1}));
}

TEST_CASE("encoding is a bijection and the group axioms hold") {
  for (const auto& factors : std::vector<std::vector<std::int64_t>>{{8}, {4, 2}, {2, 3, 2}, {5, 1, 3}, {64}, {2, 2, 2, 2, 2, 2}}) {
    const FiniteAbelianGroup g(factors);
    const auto n = g.order();
    for (Element a = 0; a < n; ++a) {
      CHECK(g.encode(g.decode(a)) == a);
      CHECK(g.add(a, g.negate(a)) == 0);
      for (Element b = 0; b < n; ++b) {
        CHECK(g.add(a, b) == g.add(b, a));
        if (n <= 16) {
          for (Element c = 0; c < n; ++c) CHECK(g.add(a, g.add(b, c)) == g.add(g.add(a, b), c));
        }
      }
    }
    const auto table = g.addition_table();
    for (Element a = 0; a < n; ++a) {
      for (Element b = 0; b < n; ++b) CHECK(table[static_cast<std::size_t>(a * n + b)] == g.add(a, b));
    }
  }
}

TEST_CASE("average examples") {
  CHECK(average(GroupFunction::constant(FiniteAbelianGroup::cyclic(16), 1.0)) == doctest::Approx(1.0));
  const std::vector<Element> zero{0};
  CHECK(average(GroupFunction::indicator(FiniteAbelianGroup::cyclic(4), zero)) == doctest::Approx(0.25));
  const auto f = GroupFunction::from(FiniteAbelianGroup::cyclic(5), [](Element x) { return static_cast<double>(x); });
  CHECK(average(f) == doctest::Approx(2.0));
}

TEST_CASE("average is linear") {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const auto f = testing::random_function(13, seed);
    const auto g = testing::random_function(13, seed + 1000);
    Rng rng(seed);
    const double a = rng.uniform(-3, 3), b = rng.uniform(-3, 3);
    CHECK(std::abs(average(a * f + b * g) - (a * average(f) + b * average(g))) <= 1e-12);
  }
}

TEST_CASE("lp_norm examples and errors") {
  const auto z8 = FiniteAbelianGroup::cyclic(8);
  for (double p : {1.5, 2.0, 7.0, std::numeric_limits<double>::infinity()}) {
    CHECK(lp_norm(GroupFunction::constant(z8, -3.0), p) == doctest::Approx(3.0));
  }
  const std::vector<Element> half{0, 1, 2, 3};
  CHECK(lp_norm(GroupFunction::indicator(z8, half), 2.0) == doctest::Approx(std::sqrt(0.5)));
  const auto alt = GroupFunction::from(FiniteAbelianGroup::cyclic(6), [](Element x) { return x % 2 ? -1.0 : 1.0; });
  CHECK(lp_norm(alt, std::numeric_limits<double>::infinity()) == 1.0);
  CHECK_THROWS_AS(lp_norm(alt, 1.0), Error);
  CHECK_THROWS_AS(lp_norm(alt, 0.5), Error);
}

TEST_CASE("lp_norm is monotone in p") {
  const std::vector<double> ps{1.1, 1.5, 2.0, 3.0, 4.0, 8.0, std::numeric_limits<double>::infinity()};
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const auto f = testing::random_function(11, seed, -2.0, 2.0);
    for (std::size_t i = 0; i + 1 < ps.size(); ++i) CHECK(lp_norm(f, ps[i]) <= lp_norm(f, ps[i + 1]) + 1e-12);
  }
}

TEST_CASE("group functions validate their input") {
  const auto z4 = FiniteAbelianGroup::cyclic(4);
  CHECK_THROWS_AS(GroupFunction(z4, {1.0, 2.0}), Error);
  CHECK_THROWS_AS(GroupFunction(z4, {1.0, 2.0, std::nan(""), 0.0}), Error);
  const auto f = GroupFunction::constant(z4, 1.0);
  const auto g = GroupFunction::constant(FiniteAbelianGroup::cyclic(5), 1.0);
  CHECK_THROWS_AS(f + g, Error);
}

TEST_CASE("pairwise summation") {
  std::vector<double> v(1000);
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = static_cast<double>(i);
  CHECK(pairwise_sum(v) == 499500.0);
  PairwiseAccumulator acc;
  for (double x : v) acc.add(x);
  CHECK(acc.sum() == 499500.0);
  CHECK(acc.count() == 1000);
  CHECK(pairwise_mean(std::vector<double>{}) == 0.0);
}

TEST_CASE("rng streams are reproducible") {
  Rng a(7), b(7);
  for (int i = 0; i < 100; ++i) CHECK(a.next() == b.next());
  Rng r(3);
  const auto set = r.subset(32, 16);
  CHECK(set.size() == 16);
  CHECK(std::is_sorted(set.begin(), set.end()));
  CHECK(std::adjacent_find(set.begin(), set.end()) == set.end());
  for (int i = 0; i < 1000; ++i) {
    const auto x = r.below(7);
    CHECK(x < 7);
    const double u = r.uniform();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
  }
  CHECK(derive_seed(7, 0) != derive_seed(7, 1));
}
