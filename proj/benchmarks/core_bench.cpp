#include "ramified/dimension.hpp"
#include "ramified/fermat.hpp"
#include "ramified/geometry.hpp"
#include "ramified/plan.hpp"
#include "ramified/solver.hpp"
#include "ramified/topology.hpp"

#include <benchmark/benchmark.h>

#include <cmath>
#include <numbers>

namespace {

using namespace ramified;

Curvature curvature_arg(const benchmark::State& state) { return Curvature(static_cast<double>(state.range(0)) / 2.0); }

void BM_Distance(benchmark::State& state) {
  const Curvature k = curvature_arg(state);
  const ModelPoint p = ModelPoint::from_polar(k, 0.7, 0.3);
  const ModelPoint q = ModelPoint::from_polar(k, 1.1, 2.4);
  for (auto _ : state) benchmark::DoNotOptimize(distance(p, q));
}
BENCHMARK(BM_Distance)->Arg(0)->Arg(1)->Arg(-2);

void BM_Fermat(benchmark::State& state) {
  const Curvature k = curvature_arg(state);
  const std::vector<FermatTerm> terms = {{ModelPoint::from_polar(k, 1.0, 0.0), 1.0},
                                         {ModelPoint::from_polar(k, 1.0, 2.0), 0.8},
                                         {ModelPoint::from_polar(k, 1.2, 4.0), 1.3}};
  for (auto _ : state) benchmark::DoNotOptimize(weighted_fermat_point(terms, base_point(k)).value);
}
BENCHMARK(BM_Fermat)->Arg(0)->Arg(1)->Arg(-2);

void BM_SolveY(benchmark::State& state) {
  const Curvature k = curvature_arg(state);
  const AtomicMeasure a(
      {{ModelPoint::from_polar(k, 1.0, 0.0), 0.5}, {ModelPoint::from_polar(k, 1.0, std::numbers::pi), 0.5}});
  const AtomicMeasure b = dirac(ModelPoint::from_polar(k, 2.0, -std::numbers::pi / 2));
  SolverOptions options;
  options.threads = 1;
  for (auto _ : state) benchmark::DoNotOptimize(solve(a, b, 0.5, k, options).cost);
}
BENCHMARK(BM_SolveY)->Arg(0)->Arg(1)->Arg(-2)->Unit(benchmark::kMillisecond);

void BM_JAlpha3x3(benchmark::State& state) {
  const Curvature k(0.0);
  std::vector<Atom> xs, ys;
  for (int i = 0; i < 3; ++i) {
    xs.push_back({ModelPoint::plane(0.0, i), 0.2 + 0.1 * i});
    ys.push_back({ModelPoint::plane(2.0, 0.5 * i), 0.4 - 0.05 * i});
  }
  const AtomicMeasure a(xs);
  const AtomicMeasure b = AtomicMeasure(ys).scaled(a.total_mass() / AtomicMeasure(ys).total_mass());
  JAlphaOptions options;
  options.threads = 1;
  for (auto _ : state) benchmark::DoNotOptimize(j_alpha(a, b, 0.5, options).value);
}
BENCHMARK(BM_JAlpha3x3)->Unit(benchmark::kMicrosecond);

void BM_EnumerateTopologies(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(enumerate_topologies(static_cast<std::size_t>(state.range(0))).size());
}
BENCHMARK(BM_EnumerateTopologies)->DenseRange(3, 6)->Unit(benchmark::kMillisecond);

void BM_CantorDimension(benchmark::State& state) {
  const NestedCollection f = cantor_collection(static_cast<std::size_t>(state.range(0)));
  std::vector<double> grid;
  for (int i = 0; i <= 20; ++i) grid.push_back(-1.0 + 0.05 * i);
  DimensionOptions options;
  options.threads = 1;
  for (auto _ : state) benchmark::DoNotOptimize(transport_dim_estimate(f, grid, options).lower);
}
BENCHMARK(BM_CantorDimension)->Arg(8)->Arg(12)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
