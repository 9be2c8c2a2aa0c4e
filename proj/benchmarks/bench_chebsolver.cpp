#include <benchmark/benchmark.h>

#include "qlbm/chebsolver.hpp"

using namespace qlbm;

static void bm_inverse_poly(benchmark::State& state) {
  const int degree = static_cast<int>(state.range(0));
  for (auto _ : state) {
    ChebyshevPoly p = inverse_poly(3500.0, degree);
    benchmark::DoNotOptimize(p.coeffs.data());
  }
}
BENCHMARK(bm_inverse_poly)->Arg(3501)->Arg(35001)->Unit(benchmark::kMillisecond);

static void bm_clenshaw(benchmark::State& state) {
  Geometry g(4, 4);
  FlowParams p = FlowParams::derive(1.0, 0.01, 0.5, 4, 1, 4);
  GlobalSystem sys = assemble_system(g, p, IndexMode::Physical);
  ChebyshevPoly poly = inverse_poly(500.0, static_cast<int>(state.range(0)));
  for (auto _ : state) {
    auto out = clenshaw_apply(sys, 32.0, poly);
    benchmark::DoNotOptimize(out.data());
  }
}
BENCHMARK(bm_clenshaw)->Arg(1001)->Arg(5001)->Unit(benchmark::kMillisecond);
