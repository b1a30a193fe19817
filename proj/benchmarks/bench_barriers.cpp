#include "mongeampere/barriers/barrier.hpp"

#include <benchmark/benchmark.h>

namespace {

void BM_DetHessian(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  auto s = ma::barriers::BarrierSpec::w_bar(n);
  ma::Vec x = ma::Vec::Constant(n, 0.3);
  for (auto _ : state) benchmark::DoNotOptimize(s.det_hessian(x));
}
BENCHMARK(BM_DetHessian)->DenseRange(2, 5);

void BM_DetRange(benchmark::State& state) {
  auto s = ma::barriers::BarrierSpec::w_eps(2, 0.25);
  for (auto _ : state) benchmark::DoNotOptimize(ma::barriers::det_range(s, 0.35).min);
}
BENCHMARK(BM_DetRange)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
