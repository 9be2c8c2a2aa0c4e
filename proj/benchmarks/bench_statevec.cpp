#include <benchmark/benchmark.h>

#include "qlbm/oracles.hpp"
#include "qlbm/lowering.hpp"
#include "qlbm/statevec.hpp"

using namespace qlbm;

static void bm_dense_apply_ua(benchmark::State& state) {
  Geometry g(4, 4);
  FlowParams p = FlowParams::derive(1.0, 0.01, 0.5, 4, 1, 4);
  Circuit c = build_UA(g, p);
  std::vector<double> amps(std::uint64_t(1) << c.layout.num_qubits(), 0.0);
  amps[1] = 1.0;
  for (auto _ : state) {
    qlbm::apply(c, amps);
    benchmark::DoNotOptimize(amps.data());
  }
}
BENCHMARK(bm_dense_apply_ua)->Unit(benchmark::kMillisecond);

static void bm_extract_block_sparse(benchmark::State& state) {
  Geometry g(4, 4);
  FlowParams p = FlowParams::derive(1.0, 0.01, 0.5, 4, 1, 4);
  Circuit c = build_UA(g, p);
  for (auto _ : state) {
    DenseBlock b = extract_block(c, ExtractMethod::Sparse);
    benchmark::DoNotOptimize(b.data.data());
  }
}
BENCHMARK(bm_extract_block_sparse)->Unit(benchmark::kMillisecond);

static void bm_lower_ul(benchmark::State& state) {
  Geometry g = Geometry::with_default_obstacle(16, 16);
  FlowParams p = FlowParams::derive(1.0, 0.01, 0.5, 64, 1, 16);
  Circuit c = build_UL(g, p);
  for (auto _ : state) {
    GateCounts n = count_gates(c);
    benchmark::DoNotOptimize(n.toffoli);
  }
}
BENCHMARK(bm_lower_ul)->Unit(benchmark::kMillisecond);
