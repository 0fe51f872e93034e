#include <benchmark/benchmark.h>

#include "common.hpp"
#include "lmg/model.hpp"

namespace {

void BM_ClosedFormH0(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto p = bench::strong_drive(n);
  const auto ops = lmg::build_ops(n);
  for (auto _ : state) benchmark::DoNotOptimize(lmg::effective_h0_closed_form(p, ops));
}
BENCHMARK(BM_ClosedFormH0)->Arg(10)->Arg(100)->Unit(benchmark::kMicrosecond);

void BM_QuadratureH0(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto p = bench::strong_drive(n);
  const auto ops = lmg::build_ops(n);
  for (auto _ : state) benchmark::DoNotOptimize(lmg::time_averaged_hamiltonian(p, ops));
}
BENCHMARK(BM_QuadratureH0)->Arg(10)->Arg(40)->Unit(benchmark::kMillisecond);

}  // namespace
