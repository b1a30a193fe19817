#include "mongeampere/convexfn/measure.hpp"
#include "mongeampere/solver/mesh.hpp"

#include <benchmark/benchmark.h>

#include <memory>

namespace {

ma::convexfn::PLConvexFunction paraboloid(int cells, int dim) {
  std::vector<std::vector<double>> axes(dim, ma::solver::uniform_axis(0, 1, cells));
  auto mesh = std::make_shared<const ma::solver::Mesh>(ma::solver::Mesh::tensor(axes));
  ma::Vec v(mesh->size());
  for (ma::Index i = 0; i < mesh->size(); ++i) v(i) = 0.5 * mesh->nodes()[i].squaredNorm();
  return ma::convexfn::PLConvexFunction(mesh->node_set(), v);
}

void BM_Measure2D(benchmark::State& state) {
  auto u = paraboloid(static_cast<int>(state.range(0)), 2);
  for (auto _ : state) benchmark::DoNotOptimize(ma::convexfn::ma_measure(u).total);
  state.SetItemsProcessed(state.iterations() * u.size());
}
BENCHMARK(BM_Measure2D)->Arg(16)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

void BM_Measure3D(benchmark::State& state) {
  auto u = paraboloid(static_cast<int>(state.range(0)), 3);
  for (auto _ : state) benchmark::DoNotOptimize(ma::convexfn::ma_measure(u).total);
  state.SetItemsProcessed(state.iterations() * u.size());
}
BENCHMARK(BM_Measure3D)->Arg(6)->Arg(10)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
