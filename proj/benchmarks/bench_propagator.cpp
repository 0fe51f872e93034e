#include <benchmark/benchmark.h>

#include "common.hpp"
#include "lmg/dynamics.hpp"
#include "lmg/floquet.hpp"

namespace {

void BM_Monodromy(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto p = bench::strong_drive(n);
  const auto ops = lmg::build_ops(n);
  for (auto _ : state) benchmark::DoNotOptimize(lmg::monodromy(p, ops));
  state.SetComplexityN(n);
}
BENCHMARK(BM_Monodromy)->Arg(10)->Arg(20)->Arg(40)->Arg(80)->Unit(benchmark::kMillisecond);

void BM_EvolveState(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto p = bench::strong_drive(n);
  const auto ops = lmg::build_ops(n);
  const auto psi0 = lmg::coherent_state_at(n, 0.0, 0.5);
  const std::vector<double> times = {10 * p.period()};
  for (auto _ : state) benchmark::DoNotOptimize(lmg::evolve_states(p, ops, psi0, times));
}
BENCHMARK(BM_EvolveState)->Arg(20)->Arg(100)->Arg(200)->Unit(benchmark::kMillisecond);

void BM_Quasienergies(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto p = bench::strong_drive(n);
  const auto u = lmg::monodromy(p, lmg::build_ops(n));
  for (auto _ : state) benchmark::DoNotOptimize(lmg::quasienergies(u, p.omega));
}
BENCHMARK(BM_Quasienergies)->Arg(20)->Arg(100)->Unit(benchmark::kMillisecond);

}  // namespace
