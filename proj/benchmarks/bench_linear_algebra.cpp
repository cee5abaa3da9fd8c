#include <benchmark/benchmark.h>

#include "gspin/group_reps.hpp"
#include "gspin/invariant_solver.hpp"
#include "gspin/kernel.hpp"

using namespace gspin;

static void BM_MatrixExpG2(benchmark::State& state) {
  const LieAlgebraBasis g2 = g2_algebra_basis();
  Matrix x = Matrix::Zero(7, 7);
  for (int a = 0; a < g2.size(); ++a) x += (0.1 * (a + 1)) * g2.generators[a];
  for (auto _ : state) benchmark::DoNotOptimize(matrix_exp(x, static_cast<double>(state.range(0))));
}
BENCHMARK(BM_MatrixExpG2)->Arg(1)->Arg(100);

static void BM_InvarianceOperator(benchmark::State& state) {
  const LieAlgebraBasis so = so_algebra_basis(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(invariance_operator(so, 3));
}
BENCHMARK(BM_InvarianceOperator)->Arg(5)->Arg(9);

static void BM_KernelDense(benchmark::State& state) {
  const SparseMatrix m = invariance_operator(g2_algebra_basis(), 3);
  KernelOptions opts;
  opts.method = KernelMethod::Dense;
  for (auto _ : state) benchmark::DoNotOptimize(psd_kernel(m, opts));
}
BENCHMARK(BM_KernelDense)->Unit(benchmark::kMillisecond);

static void BM_KernelSubspace(benchmark::State& state) {
  const SparseMatrix m = invariance_operator(so_algebra_basis(static_cast<int>(state.range(0))), 4);
  KernelOptions opts;
  opts.method = KernelMethod::SubspaceIteration;
  for (auto _ : state) benchmark::DoNotOptimize(psd_kernel(m, opts));
}
BENCHMARK(BM_KernelSubspace)->Arg(7)->Unit(benchmark::kMillisecond);
