#include <benchmark/benchmark.h>

#include "gspin/closure.hpp"
#include "gspin/dynamics.hpp"
#include "gspin/quantum_limit.hpp"

using namespace gspin;

static void BM_ClosureVerdict(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(closure_verdict(d));
}
BENCHMARK(BM_ClosureVerdict)->DenseRange(3, 7)->Unit(benchmark::kMillisecond);

static void BM_SectorEvolution(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const SectorPropagator prop(SectorHamiltonian(make_couplings(CouplingRule::Fixed, n)));
  const SectorState psi = SectorState::probe(0.6, Complex(0.0, 0.8), n);
  for (auto _ : state) benchmark::DoNotOptimize(prop.evolve(psi, 1.0));
  state.SetComplexityN(n);
}
BENCHMARK(BM_SectorEvolution)->RangeMultiplier(8)->Range(8, 4096)->Complexity(benchmark::oN);

static void BM_ErrorScalingSweep(benchmark::State& state) {
  for (auto _ : state)
    benchmark::DoNotOptimize(error_scaling_sweep({8, 16, 32, 64, 128, 256, 512, 1024, 2048, 4096},
                                                 CouplingRule::Fixed, 0.0, 1.0, 1.0));
}
BENCHMARK(BM_ErrorScalingSweep)->Unit(benchmark::kMillisecond);

static void BM_BruteForceCrosscheck(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state)
    benchmark::DoNotOptimize(brute_force_crosscheck(make_couplings(CouplingRule::Fixed, n), 0.6,
                                                    Complex(0.0, 0.8), 1.0));
}
BENCHMARK(BM_BruteForceCrosscheck)->Arg(6)->Arg(10)->Unit(benchmark::kMillisecond);

static void BM_IntegrateD3(benchmark::State& state) {
  const CompositeState psi = canonical_d3_state(-1);
  for (auto _ : state) benchmark::DoNotOptimize(integrate_composite_d3(psi, 1.0, -1.0, 6.283185307179586, 1e-3));
}
BENCHMARK(BM_IntegrateD3)->Unit(benchmark::kMillisecond);
