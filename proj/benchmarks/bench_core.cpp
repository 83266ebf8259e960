// Microbenchmarks for the hot paths: the grid right-hand side, the radial
// steppers, the deterministic reduction, and the tensor eigensolver.

#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "qflow/qflow.hpp"

namespace {

using namespace qflow;

FieldState make_case1_field(int dim, int n, const Parameters& p) {
  const GridGeometry geom = make_grid(dim, n);
  const auto cls = classify(geom);
  InitSpec spec;
  spec.family = dim == 3 ? InitFamily::CaseI : InitFamily::UvTanh;
  const BoundaryScenario bc = dim == 3 ? BoundaryScenario::BallRadial
                                       : BoundaryScenario::DiscPlanarUniaxial;
  return generate_grid(spec, geom, cls, bc, p);
}

void BM_GridRhs3D(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const Parameters p = transition_parameters(0.05);
  const GridGeometry geom = make_grid(3, n);
  const auto cls = classify(geom);
  FieldState y = make_case1_field(3, n, p);
  FieldState out = make_field(geom);
  for (auto _ : state) {
    grid_rhs(y, cls, p, Stencil::SecondOrder, out);
    benchmark::DoNotOptimize(out.comp[0].data());
  }
  state.SetItemsProcessed(state.iterations() *
                          static_cast<int64_t>(geom.size()));
}
BENCHMARK(BM_GridRhs3D)->Arg(32)->Arg(64)->Arg(96);

void BM_GridRhs2D(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const Parameters p = transition_parameters(0.01);
  const GridGeometry geom = make_grid(2, n);
  const auto cls = classify(geom);
  FieldState y = make_case1_field(2, n, p);
  FieldState out = make_field(geom);
  for (auto _ : state) {
    grid_rhs(y, cls, p, Stencil::SecondOrder, out);
    benchmark::DoNotOptimize(out.comp[0].data());
  }
  state.SetItemsProcessed(state.iterations() *
                          static_cast<int64_t>(geom.size()));
}
BENCHMARK(BM_GridRhs2D)->Arg(128)->Arg(256);

void BM_GridEnergy3D(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const Parameters p = transition_parameters(0.05);
  const GridGeometry geom = make_grid(3, n);
  const auto cls = classify(geom);
  const FieldState y = make_case1_field(3, n, p);
  for (auto _ : state) {
    benchmark::DoNotOptimize(grid_energy(y, cls, p));
  }
}
BENCHMARK(BM_GridEnergy3D)->Arg(64);

void BM_StepHedgehog(benchmark::State& state) {
  const Parameters p = transition_parameters(0.01);
  const RadialMesh mesh{static_cast<int>(state.range(0))};
  InitSpec spec;
  spec.r0 = 0.75;
  HedgehogProfile prof = generate_hedgehog(spec, mesh, p);
  const double dt = stable_dt_hedgehog(mesh, p);
  for (auto _ : state) {
    step_hedgehog(prof, p, dt, 1);
  }
}
BENCHMARK(BM_StepHedgehog)->Arg(2048);

void BM_DeterministicSum(benchmark::State& state) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  std::vector<double> x(static_cast<std::size_t>(state.range(0)));
  for (double& v : x) {
    v = dist(rng);
  }
  for (auto _ : state) {
    benchmark::DoNotOptimize(deterministic_sum(x.data(), x.size()));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_DeterministicSum)->Arg(1 << 16)->Arg(1 << 20);

void BM_EigenDecompose(benchmark::State& state) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> dist(-0.5, 0.5);
  std::vector<QTensor> qs(512);
  for (QTensor& q : qs) {
    q = QTensor{dist(rng), dist(rng), dist(rng), dist(rng), dist(rng)};
  }
  std::size_t k = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(eigen_decompose(qs[k]));
    k = (k + 1) % qs.size();
  }
}
BENCHMARK(BM_EigenDecompose);

}  // namespace

BENCHMARK_MAIN();
