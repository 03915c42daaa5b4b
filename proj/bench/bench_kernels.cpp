// Reference (definition-level) kernels against the library paths.

#include "uninorm/boxnorms.hpp"
#include "uninorm/fourier.hpp"
#include "uninorm/random.hpp"
#include "uninorm/reference.hpp"
#include "uninorm/uniformity.hpp"

#include <benchmark/benchmark.h>

using namespace uninorm;

namespace {

GroupFunction random_function(std::int64_t n) {
  Rng rng(static_cast<std::uint64_t>(n));
  return GroupFunction(FiniteAbelianGroup::cyclic(n), rng.uniforms(static_cast<std::size_t>(n), -1.0, 1.0));
}

TensorFunction random_tensor(std::int64_t v, int arity) {
  Rng rng(static_cast<std::uint64_t>(v * 10 + arity));
  std::int64_t size = 1;
  for (int i = 0; i < arity; ++i) size *= v;
  return TensorFunction(v, arity, rng.uniforms(static_cast<std::size_t>(size), -1.0, 1.0));
}

void BM_GowersReference(benchmark::State& state) {
  const auto f = random_function(state.range(0));
  const int s = static_cast<int>(state.range(1));
  for (auto _ : state) benchmark::DoNotOptimize(reference::gowers_power(f, s));
}
BENCHMARK(BM_GowersReference)->Args({8, 2})->Args({16, 2})->Args({8, 3})->Args({16, 3});

void BM_GowersRecursive(benchmark::State& state) {
  const auto f = random_function(state.range(0));
  const int s = static_cast<int>(state.range(1));
  for (auto _ : state) benchmark::DoNotOptimize(gowers_norm_recursive(f, s).value);
}
BENCHMARK(BM_GowersRecursive)->Args({8, 2})->Args({16, 2})->Args({8, 3})->Args({16, 3})->Args({256, 3})->Args({1024, 2});

void BM_GowersFourier(benchmark::State& state) {
  const auto f = random_function(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(gowers_norm_u2_fourier(f).value);
}
BENCHMARK(BM_GowersFourier)->Arg(16)->Arg(1024)->Arg(1000)->Arg(1 << 16);

void BM_FourierReference(benchmark::State& state) {
  const auto f = random_function(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(reference::fourier(f));
}
BENCHMARK(BM_FourierReference)->Arg(256)->Arg(1024);

void BM_FourierFast(benchmark::State& state) {
  const auto f = random_function(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(fourier_coefficients(f));
}
BENCHMARK(BM_FourierFast)->Arg(256)->Arg(1024);

void BM_BoxReference(benchmark::State& state) {
  const auto F = random_tensor(state.range(0), 2);
  const int ell = static_cast<int>(state.range(1));
  for (auto _ : state) benchmark::DoNotOptimize(reference::box_power(F, ell));
}
BENCHMARK(BM_BoxReference)->Args({4, 2})->Args({6, 2})->Args({4, 4});

void BM_BoxNorm(benchmark::State& state) {
  const auto F = random_tensor(state.range(0), 2);
  const int ell = static_cast<int>(state.range(1));
  for (auto _ : state) benchmark::DoNotOptimize(box_norm_ell(F, ell).value);
}
BENCHMARK(BM_BoxNorm)->Args({4, 2})->Args({6, 2})->Args({4, 4})->Args({16, 4});

void BM_CutReference(benchmark::State& state) {
  const auto F = random_tensor(state.range(0), 2);
  for (auto _ : state) benchmark::DoNotOptimize(reference::cut_norm(F));
}
BENCHMARK(BM_CutReference)->Arg(2);

void BM_CutFactored(benchmark::State& state) {
  const auto F = random_tensor(state.range(0), 2);
  for (auto _ : state) benchmark::DoNotOptimize(cut_norm(F).lower_bound);
}
BENCHMARK(BM_CutFactored)->Arg(2)->Arg(4)->Arg(8);

void BM_CutAlternating(benchmark::State& state) {
  const auto F = random_tensor(state.range(0), 2);
  SearchOptions o;
  o.mode = SearchMode::alternating;
  for (auto _ : state) benchmark::DoNotOptimize(cut_norm(F, o).lower_bound);
}
BENCHMARK(BM_CutAlternating)->Arg(8)->Arg(64);

void BM_WeakReference(benchmark::State& state) {
  const auto f = random_function(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(reference::weak_norm(f, 2));
}
BENCHMARK(BM_WeakReference)->Arg(3)->Arg(4);

void BM_WeakExhaustive(benchmark::State& state) {
  const auto f = random_function(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(weak_norm(f, 2).lower_bound);
}
BENCHMARK(BM_WeakExhaustive)->Arg(3)->Arg(4)->Arg(6);

}  // namespace

BENCHMARK_MAIN();
