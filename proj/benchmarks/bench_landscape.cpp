#include <benchmark/benchmark.h>

#include "common.hpp"
#include "lmg/landscape.hpp"

namespace {

void BM_QelGrid(benchmark::State& state) {
  const auto p = bench::strong_drive(10);
  const int g = static_cast<int>(state.range(0));
  for (auto _ : state) {
    double acc = 0.0;
    for (int i = 0; i < g; ++i)
      for (int k = 0; k < g; ++k) {
        const double q = -1.0 + 2.0 * i / (g - 1), s = -1.0 + 2.0 * k / (g - 1);
        if (q * q + s * s <= 1.0) acc += lmg::qel(p, q, s);
      }
    benchmark::DoNotOptimize(acc);
  }
  state.SetItemsProcessed(state.iterations() * g * g);
}
BENCHMARK(BM_QelGrid)->Arg(201)->Arg(401);

void BM_QelHessian(benchmark::State& state) {
  const auto p = bench::strong_drive(10);
  for (auto _ : state) benchmark::DoNotOptimize(lmg::qel_hessian(p, 0.1, 0.3));
}
BENCHMARK(BM_QelHessian);

void BM_FindMinima(benchmark::State& state) {
  const auto p = bench::strong_drive(10);
  const int g = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(lmg::find_minima(p, g));
}
BENCHMARK(BM_FindMinima)->Arg(101)->Arg(201)->Unit(benchmark::kMillisecond);

}  // namespace
