#include <benchmark/benchmark.h>

#include <algorithm>
#include <numeric>
#include <random>

#include "modtv/generators.hpp"
#include "modtv/modularity.hpp"
#include "modtv/objective.hpp"
#include "modtv/solver.hpp"
#include "modtv/spectral.hpp"

namespace {

using namespace modtv;

Graph bench_graph(Index n) {
  const Index blocks[] = {n / 2, n - n / 2};
  return gen::planted_partition(blocks, 20.0 / n, 4.0 / n, 1234);
}

Vector random_point(Index n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Vector x(static_cast<std::size_t>(n));
  for (double& v : x) v = u(rng);
  return x;
}

void BM_GradFull(benchmark::State& state) {
  const auto n = static_cast<Index>(state.range(0));
  Graph g = bench_graph(n);
  Vector x = random_point(n, 1);
  for (auto _ : state) benchmark::DoNotOptimize(grad_full(g, x, 1.4));
  state.SetComplexityN(n);
}
BENCHMARK(BM_GradFull)->RangeMultiplier(2)->Range(256, 4096)->Complexity(benchmark::oNSquared);

// args: n, |W|
void BM_GradIncremental(benchmark::State& state) {
  const auto n = static_cast<Index>(state.range(0));
  const auto w_size = static_cast<Index>(state.range(1));
  Graph g = bench_graph(n);
  Vector x = random_point(n, 2);
  Vector grad = grad_full(g, x, 1.4);
  std::vector<Index> w(static_cast<std::size_t>(n));
  std::iota(w.begin(), w.end(), Index{0});
  std::mt19937_64 rng(3);
  std::shuffle(w.begin(), w.end(), rng);
  w.resize(static_cast<std::size_t>(w_size));
  Vector y = x;
  for (Index i : w) y[i] = -y[i];
  for (auto _ : state) benchmark::DoNotOptimize(grad_incremental(g, x, grad, y, w, 1.4));
}
BENCHMARK(BM_GradIncremental)
    ->Args({2000, 2})
    ->Args({2000, 16})
    ->Args({2000, 60})
    ->Args({2000, 333})
    ->Args({2000, 666})
    ->Args({2000, 1000});

void BM_TvQ(benchmark::State& state) {
  const auto n = static_cast<Index>(state.range(0));
  Graph g = bench_graph(n);
  Vector x = random_point(n, 4);
  for (auto _ : state) benchmark::DoNotOptimize(tv_q(g, x));
  state.SetComplexityN(n);
}
BENCHMARK(BM_TvQ)->RangeMultiplier(4)->Range(1024, 65536)->Complexity(benchmark::oNLogN);

void BM_ThresholdSweep(benchmark::State& state) {
  const auto n = static_cast<Index>(state.range(0));
  Graph g = bench_graph(n);
  Vector x = random_point(n, 5);
  for (auto _ : state) benchmark::DoNotOptimize(threshold_sweep(g, x));
  state.SetComplexityN(n);
}
BENCHMARK(BM_ThresholdSweep)->RangeMultiplier(4)->Range(1024, 65536)->Complexity(benchmark::oNLogN);

void BM_FastAtvoLinearStart(benchmark::State& state) {
  const auto n = static_cast<Index>(state.range(0));
  Graph g = bench_graph(n);
  Vector x0 = leading_eigenvector(g).vector;
  for (auto _ : state) {
    benchmark::DoNotOptimize(fast_atvo(g, x0, BoxSpec{1.0, 1.0}, SolverParams{}));
  }
}
BENCHMARK(BM_FastAtvoLinearStart)->Arg(500)->Arg(2000)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
