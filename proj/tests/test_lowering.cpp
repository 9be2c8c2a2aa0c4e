#include "doctest.h"
#include <stdexcept>
#include "qlbm/lowering.hpp"
#include "qlbm/oracles.hpp"
#include "qlbm/statevec.hpp"

#include <cmath>
#include <random>

using namespace qlbm;

namespace {
Circuit small_circuit(std::vector<Gate> gates, int qubits) {
  Circuit c;
  c.layout.add("r", qubits, true);
  for (Gate& g : gates) c.append(std::move(g));
  return c;
}

// Applies both the original and the lowered circuit to random states (work
// qubits clean) and compares the system-and-ancilla amplitudes.
void check_lowering_equivalence(const Circuit& c, unsigned seed) {
  Circuit low = lower(c);
  const int nq = c.layout.num_qubits();
  const int nq_low = low.layout.num_qubits();
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  std::vector<double> base(std::uint64_t(1) << nq);
  for (double& v : base) v = dist(rng);

  std::vector<double> a = base;
  apply(c, a);
  std::vector<double> b(std::uint64_t(1) << nq_low, 0.0);
  std::copy(base.begin(), base.end(), b.begin());  // work register at |0>
  apply(low, b);
  for (std::uint64_t i = 0; i < base.size(); ++i)
    CHECK(a[i] == doctest::Approx(b[i]).epsilon(1e-12));
  for (std::uint64_t i = base.size(); i < b.size(); ++i) CHECK(std::abs(b[i]) < 1e-12);
}
}  // namespace

TEST_CASE("two-control X lowers to exactly one Toffoli") {
  Circuit c = small_circuit({{GateKind::X, {2}, 0.0, {{0, true}, {1, true}}}}, 3);
  GateCounts n = count_gates(c);
  CHECK(n.toffoli == 1);
  CHECK(n.cnot == 0);
  CHECK(n.x == 0);
}

TEST_CASE("k-control X lowers to 2(k-1) Toffoli plus one CNOT") {
  for (int k : {3, 4, 6}) {
    std::vector<Control> ctrls;
    for (int i = 0; i < k; ++i) ctrls.push_back({i, true});
    Circuit c = small_circuit({{GateKind::X, {k}, 0.0, ctrls}}, k + 1);
    GateCounts n = count_gates(c);
    CHECK(n.toffoli == 2 * (k - 1));
    CHECK(n.cnot == 1);
    Circuit low = lower(c);
    CHECK(low.layout.reg("work").width == k - 1);
    check_lowering_equivalence(c, 100 + k);
  }
}

TEST_CASE("negative controls are conjugated by X pairs") {
  Circuit c = small_circuit({{GateKind::X, {2}, 0.0, {{0, false}, {1, true}}}}, 3);
  GateCounts n = count_gates(c);
  CHECK(n.toffoli == 1);
  CHECK(n.x == 2);
  check_lowering_equivalence(c, 7);
}

TEST_CASE("controlled RY lowers to the ladder plus a two-rotation core") {
  std::vector<Control> ctrls{{0, true}, {1, false}, {2, true}};
  Circuit c = small_circuit({{GateKind::RY, {3}, 0.77, ctrls}}, 4);
  GateCounts n = count_gates(c);
  CHECK(n.toffoli == 4);  // 2(k-1), k = 3
  CHECK(n.ry == 2);       // CRY core
  CHECK(n.cnot == 2);     // CRY core
  CHECK(n.x == 2);        // negative-control conjugation
  check_lowering_equivalence(c, 11);
}

TEST_CASE("controlled swap lowers to three Toffoli-class gates") {
  Circuit c = small_circuit({{GateKind::Swap, {1, 2}, 0.0, {{0, true}}}}, 3);
  GateCounts n = count_gates(c);
  CHECK(n.toffoli == 3);
  check_lowering_equivalence(c, 13);
}

TEST_CASE("incrementer cascade lowers and acts correctly") {
  Circuit c = small_circuit({{GateKind::Inc, {0, 1, 2}, 0.0, {{3, true}}}}, 4);
  check_lowering_equivalence(c, 17);
  Circuit d = small_circuit({{GateKind::Dec, {0, 1, 2}, 0.0, {}}}, 3);
  check_lowering_equivalence(d, 19);
}

TEST_CASE("lowered U_A block matches the unlowered block") {
  Geometry g(4, 2);  // keeps the lowered circuit inside the simulation budget
  FlowParams p = FlowParams::derive(1.0, 0.01, 0.5, 4, 1, 2);
  Circuit c = build_UA(g, p);
  Circuit low = lower(c);
  REQUIRE(low.layout.num_qubits() <= kMaxSimQubits);
  DenseBlock a = extract_block(c);
  DenseBlock b = extract_block(low);
  REQUIRE(a.nrows == b.nrows);
  double worst = 0.0;
  for (std::int64_t r = 0; r < a.nrows; ++r)
    for (std::int64_t col = 0; col < a.ncols; ++col)
      worst = std::max(worst, std::abs(a.at(r, col) - b.at(r, col)));
  CHECK(worst < 1e-12);
}

TEST_CASE("t-gate estimate formula") {
  GateCounts counts;
  counts.toffoli = 1000;
  counts.ry = 100;
  ResourceEstimate r = estimate_tgates(counts, 16.0, 0.01, 10.0);
  CHECK(r.kappa_fit == doctest::Approx(3565.7751072609245).epsilon(1e-12));
  CHECK(r.degree == doctest::Approx(10.0 * r.kappa_fit + 1.0));
  double rot = 3.0 * std::log2(r.degree / 0.01);
  double want = 1000.0 * r.degree * 7.0 + (100.0 * r.degree + r.degree + 1.0) * rot;
  CHECK(r.t_count == doctest::Approx(want).epsilon(1e-12));

  // doubling T multiplies the count by about 2^1.2
  ResourceEstimate r2 = estimate_tgates(counts, 32.0, 0.01, 10.0);
  CHECK(r2.t_count / r.t_count == doctest::Approx(std::pow(2.0, 1.2)).epsilon(0.15));
}
