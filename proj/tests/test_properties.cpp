#include "doctest.h"
#include "helpers.hpp"
#include "inequalities.hpp"
#include "oracles.hpp"

#include "uninorm/boxnorms.hpp"
#include "uninorm/uniformity.hpp"

#include <cmath>

using namespace uninorm;
using testing::random_function;
using testing::random_tensor;
using testing::rel_close;
using testing::to_vector;

namespace {

void run_family(const inequality::Family& family, std::uint64_t count) {
  INFO(family.name);
  for (std::uint64_t seed = 0; seed < count; ++seed) {
    const auto c = family.instance(seed);
    INFO("seed " << seed << ": " << c.lhs << " vs " << c.rhs);
    CHECK(std::isfinite(c.lhs));
    CHECK(c.holds());
  }
}

}  // namespace

TEST_CASE("inequality suite on seeded instances") {
  for (const auto& family : inequality::suite()) run_family(family, 40);
  for (const auto& family : inequality::gowers_properties()) run_family(family, 40);
}

TEST_CASE("double-cube correlation matches direct enumeration") {
  const int s = 2;
  for (std::uint64_t seed = 0; seed < 3; ++seed) {
    const std::int64_t n = 3;
    const auto g = random_function(n, seed);
    std::vector<std::vector<GroupFunction>> fam(2);
    for (int k = 0; k < 2; ++k)
      for (int m = 1; m < 4; ++m) fam[k].push_back(random_function(n, seed * 100 + static_cast<std::uint64_t>(k * 10 + m)));
    const double fast = average(g * cube_marginal(fam[0]) * cube_marginal(fam[1]));
    double total = 0.0;
    long count = 0;
    oracle::for_each_tuple(1 + 2 * s, n, [&](const std::vector<long>& t) {
      double prod = g[t[0]];
      for (int k = 0; k < 2; ++k)
        for (int m = 1; m < 4; ++m) {
          long y = t[0];
          for (int i = 0; i < s; ++i)
            if (m >> i & 1) y += t[static_cast<std::size_t>(1 + k * s + i)];
          prod *= fam[static_cast<std::size_t>(k)][static_cast<std::size_t>(m - 1)][oracle::mod(y, n)];
        }
      total += prod;
      ++count;
    });
    CHECK(rel_close(fast, total / static_cast<double>(count), 1e-12));
  }
}

TEST_CASE("double-box correlation matches the box_4 embedding") {
  // Family 1 sits on [2]^s, family 2 on {1,3}^s, G at 1^s, ones elsewhere.
  const int s = 2;
  const std::int64_t V = 2;
  for (std::uint64_t seed = 0; seed < 3; ++seed) {
    const auto G = random_tensor(V, s, seed);
    std::vector<std::vector<TensorFunction>> fam(2);
    for (int k = 0; k < 2; ++k)
      for (int m = 1; m < 4; ++m) fam[k].push_back(random_tensor(V, s, seed * 50 + static_cast<std::uint64_t>(k * 5 + m)));
    const double fast = average(G * cut_dual_kernel(DualFamily(s, fam[0])) * cut_dual_kernel(DualFamily(s, fam[1])));

    std::vector<std::vector<double>> raw(16, std::vector<double>(4, 1.0));
    raw[0] = to_vector(G.values());
    for (int m = 1; m < 4; ++m) {
      int c1 = 0, c3 = 0;
      for (int i = 0; i < s; ++i) {
        if (m >> i & 1) {
          c1 += 1 * (i == 0 ? 1 : 4);
          c3 += 2 * (i == 0 ? 1 : 4);
        }
      }
      raw[static_cast<std::size_t>(c1)] = to_vector(fam[0][static_cast<std::size_t>(m - 1)].values());
      raw[static_cast<std::size_t>(c3)] = to_vector(fam[1][static_cast<std::size_t>(m - 1)].values());
    }
    CHECK(rel_close(fast, oracle::box_correlation(raw, V, s, 4), 1e-12));
  }
}

TEST_CASE("method agreement on random functions") {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const auto f = random_function(2 + static_cast<std::int64_t>(seed % 7), seed);
    const int s = seed % 2 ? 3 : 2;
    const double direct = gowers_norm(f, s, NormMethod::direct_enumeration).value;
    CHECK(rel_close(gowers_norm(f, s, NormMethod::recursive_derivative).value, direct, 1e-9));
    CHECK(rel_close(gowers_norm_recursive(f, s, RecursionBase::autocorrelation).value, direct, 1e-9));
    CHECK(rel_close(gowers_norm(f, s, NormMethod::lifted_tensor).value, direct, 1e-9));
    if (s == 2) CHECK(rel_close(gowers_norm_u2_fourier(f).value, direct, 1e-9));
  }
}

TEST_CASE("cut norm dominates the weak norm") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto f = random_function(3 + static_cast<std::int64_t>(seed % 3), seed);
    CHECK(weak_norm(f, 2).lower_bound <= additive_cut_norm(f, 2).lower_bound + 1e-9);
  }
}
