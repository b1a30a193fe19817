#include "mongeampere/solver/mesh.hpp"
#include "mongeampere/solver/solve.hpp"

#include <benchmark/benchmark.h>

#include <memory>

namespace {

double one(const ma::Vec&) { return 1.0; }
double zero(const ma::Vec&) { return 0.0; }

void BM_SolveSquare(benchmark::State& state) {
  auto ax = ma::solver::uniform_axis(0, 1, static_cast<int>(state.range(0)));
  auto mesh = std::make_shared<const ma::solver::Mesh>(ma::solver::Mesh::tensor({ax, ax}));
  auto p = ma::solver::MAProblem::make(mesh, one, zero);
  for (auto _ : state) benchmark::DoNotOptimize(ma::solver::solve(p).max_residual);
}
BENCHMARK(BM_SolveSquare)->Arg(10)->Arg(20)->Arg(40)->Unit(benchmark::kMillisecond);

void BM_SolveGradedCube(benchmark::State& state) {
  auto lat = ma::solver::uniform_axis(0, 1, 6);
  auto mesh = std::make_shared<const ma::solver::Mesh>(
      ma::solver::Mesh::tensor({ma::solver::geometric_axis(0, 1, static_cast<int>(state.range(0)), 1e-3), lat, lat}));
  auto p = ma::solver::MAProblem::make(mesh, one, zero);
  for (auto _ : state) benchmark::DoNotOptimize(ma::solver::solve(p).max_residual);
}
BENCHMARK(BM_SolveGradedCube)->Arg(8)->Arg(12)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
