#include <benchmark/benchmark.h>

#include "weylband/classical.hpp"
#include "weylband/profile.hpp"
#include "weylband/quantum.hpp"
#include "weylband/tridiag.hpp"
#include "weylband/weylvol.hpp"

namespace {

using namespace weylband;

const SurfaceProfile& sphere() {
  static SurfaceProfile p = make_profile("sphere", {});
  return p;
}

const ObservableSpec& cos2() {
  static ObservableSpec o = make_observable("cos2s", {});
  return o;
}

void BM_TorusAverage(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(torus_average(sphere(), cos2(), 0.55, 1e-10));
  }
}
BENCHMARK(BM_TorusAverage);

void BM_RotationNumber(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(rotation_number(sphere(), 0.55, 1e-10));
  }
}
BENCHMARK(BM_RotationNumber);

void BM_TridiagEigenvalues(benchmark::State& state) {
  int n = static_cast<int>(state.range(0));
  bool complex_path = state.range(1) != 0;
  ModeOperator op =
      discretize_mode(sphere(), cos2(), 0.02, complex_path ? 0.1414 : 0.0, 20, n);
  for (auto _ : state) {
    benchmark::DoNotOptimize(tridiag_eigenvalues(op.diag, op.offdiag));
  }
}
BENCHMARK(BM_TridiagEigenvalues)->Args({512, 0})->Args({2048, 0})->Args({512, 1})->Args({2048, 1});

void BM_FlowIntegrate(benchmark::State& state) {
  TurningPoints tp = turning_points(sphere(), 0.5, 1e-12);
  FlowState st{tp.s_minus, 0.0, 0.0, 0.5};
  for (auto _ : state) {
    benchmark::DoNotOptimize(flow_integrate(sphere(), st, 20.0, 1e-10));
  }
}
BENCHMARK(BM_FlowIntegrate);

void BM_BohrSommerfeld(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        bohr_sommerfeld_spectrum(sphere(), cos2(), 0.05, 0.22, 0.9, 1.1, 0.02, 1e-10));
  }
}
BENCHMARK(BM_BohrSommerfeld);

}  // namespace

BENCHMARK_MAIN();
