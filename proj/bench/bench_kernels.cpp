// Serial reference kernels against the OpenMP kernels.

#include <benchmark/benchmark.h>
#include <omp.h>

#include <vector>

#include "iclt/circle_quad.hpp"
#include "iclt/orbit_kernels.hpp"

using namespace iclt;

namespace {

const BlaschkeProduct& product() {
  static const BlaschkeProduct f = BlaschkeProduct::make(1.0, {0.0, 0.5});
  return f;
}

std::vector<cplx> grid_points(std::size_t M) {
  const CircleGrid grid(M, 0.0);
  std::vector<cplx> pts(M);
  for (std::size_t j = 0; j < M; ++j) pts[j] = grid.point(j);
  return pts;
}

void PartialSumsReference(benchmark::State& state) {
  const auto pts = grid_points(static_cast<std::size_t>(state.range(0)));
  const std::vector<cplx> coeffs(400, cplx(1.0));
  for (auto _ : state) benchmark::DoNotOptimize(kernels::reference::orbit_partial_sums(product(), pts, 1, coeffs));
  state.SetItemsProcessed(state.iterations() * state.range(0) * 400);
}

void PartialSumsParallel(benchmark::State& state) {
  const auto pts = grid_points(static_cast<std::size_t>(state.range(0)));
  const std::vector<cplx> coeffs(400, cplx(1.0));
  const Exec exec{static_cast<int>(state.range(1))};
  for (auto _ : state) benchmark::DoNotOptimize(kernels::orbit_partial_sums(product(), pts, 1, coeffs, exec));
  state.SetItemsProcessed(state.iterations() * state.range(0) * 400);
}

const Word& word() {
  static const Word w{{1, 1}, {3, -1}, {5, 2}, {6, -2}};
  return w;
}

void WordIntegralReference(benchmark::State& state) {
  const CircleGrid grid(static_cast<std::size_t>(state.range(0)), 0.0);
  for (auto _ : state) benchmark::DoNotOptimize(kernels::reference::word_integral(product(), grid, word()));
}

void WordIntegralParallel(benchmark::State& state) {
  const CircleGrid grid(static_cast<std::size_t>(state.range(0)), 0.0);
  const Exec exec{static_cast<int>(state.range(1))};
  const Word words[] = {word()};
  const kernels::WordIntegrand integrand{words};
  for (auto _ : state)
    benchmark::DoNotOptimize(kernels::orbit_sweep(product(), grid, 6, 1, integrand, exec).mean(0));
}

void ThreadArgs(benchmark::internal::Benchmark* b, long size) {
  for (int t = 1; t <= omp_get_max_threads(); t *= 2) b->Args({size, t});
}

}  // namespace

BENCHMARK(PartialSumsReference)->Arg(1 << 16)->Unit(benchmark::kMillisecond);
BENCHMARK(PartialSumsParallel)->Apply([](auto* b) { ThreadArgs(b, 1 << 16); })->Unit(benchmark::kMillisecond);
BENCHMARK(WordIntegralReference)->Arg(1 << 18)->Unit(benchmark::kMillisecond);
BENCHMARK(WordIntegralParallel)->Apply([](auto* b) { ThreadArgs(b, 1 << 18); })->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
