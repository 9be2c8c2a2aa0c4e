#include <benchmark/benchmark.h>

#include "qlbm/timesystem.hpp"

using namespace qlbm;

namespace {
GlobalSystem reference_system() {
  Geometry g = Geometry::with_default_obstacle(8, 8);
  FlowParams p = FlowParams::derive(1.0, 0.01, 0.5, 32, 1, 8);
  return assemble_system(g, p, IndexMode::Physical);
}
}  // namespace

static void bm_a_tilde_matvec(benchmark::State& state) {
  GlobalSystem sys = reference_system();
  std::vector<double> x(static_cast<size_t>(sys.d_c), 1.0);
  std::vector<double> y(x.size());
  for (auto _ : state) {
    sys.a_tilde.matvec(x, y);
    benchmark::DoNotOptimize(y.data());
  }
}
BENCHMARK(bm_a_tilde_matvec);

static void bm_l_matvec(benchmark::State& state) {
  GlobalSystem sys = reference_system();
  std::vector<double> x(static_cast<size_t>(sys.dim()), 1.0);
  std::vector<double> y(x.size());
  for (auto _ : state) {
    sys.l.matvec(x, y);
    benchmark::DoNotOptimize(y.data());
  }
}
BENCHMARK(bm_l_matvec);

static void bm_forward_solve(benchmark::State& state) {
  GlobalSystem sys = reference_system();
  for (auto _ : state) {
    auto y = forward_solve(sys);
    benchmark::DoNotOptimize(y.data());
  }
}
BENCHMARK(bm_forward_solve);

static void bm_assemble(benchmark::State& state) {
  Geometry g = Geometry::with_default_obstacle(8, 8);
  FlowParams p = FlowParams::derive(1.0, 0.01, 0.5, 32, 1, 8);
  for (auto _ : state) {
    GlobalSystem sys = assemble_system(g, p, IndexMode::Physical);
    benchmark::DoNotOptimize(sys.l.nnz());
  }
}
BENCHMARK(bm_assemble);

BENCHMARK_MAIN();
