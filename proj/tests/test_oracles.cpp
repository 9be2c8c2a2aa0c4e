#include "doctest.h"
#include <stdexcept>
#include "qlbm/oracles.hpp"
#include "qlbm/statevec.hpp"
#include "qlbm/timesystem.hpp"

#include <cmath>
#include <numbers>

using namespace qlbm;

namespace {

std::uint64_t set_reg(const RegisterLayout& lay, std::uint64_t basis, const std::string& name,
                      int value) {
  const Register& r = lay.reg(name);
  for (int b = 0; b < r.width; ++b) {
    basis &= ~(std::uint64_t(1) << (r.offset + b));
    basis |= std::uint64_t((value >> b) & 1) << (r.offset + b);
  }
  return basis;
}

int get_reg(const RegisterLayout& lay, std::uint64_t basis, const std::string& name) {
  const Register& r = lay.reg(name);
  int v = 0;
  for (int b = 0; b < r.width; ++b) v |= int((basis >> (r.offset + b)) & 1) << b;
  return v;
}

std::uint64_t run_classical(const std::vector<Gate>& gates, std::uint64_t basis) {
  for (const Gate& g : gates) basis = apply_classical_gate(g, basis);
  return basis;
}

bool value_carrying(const Geometry& g, Vec2i n, int qs) {
  if (d2q9::is_physical(qs)) return true;
  int carried = 0;
  if (!extrapolation_slot(qs, carried)) return false;
  return n.x == g.nx() - 1 && !extrapolation_slot_masked(n, qs, g);
}

void check_oracle_routing(const Geometry& g) {
  RegisterLayout lay = ua_layout(g);
  auto set_bc_gates = build_OsetBC(lay, g);
  auto stream_gates = build_Ostreaming(lay);
  auto unset_gates = build_OunsetBC(lay, g);

  for (int x = 0; x < g.nx(); ++x)
    for (int y = 0; y < g.ny(); ++y)
      for (int qs = 0; qs < 16; ++qs) {
        Vec2i n{x, y};
        const int q_in = d2q9::kDR;  // arbitrary input velocity
        std::uint64_t basis = 0;
        basis = set_reg(lay, basis, "nx", x);
        basis = set_reg(lay, basis, "ny", y);
        basis = set_reg(lay, basis, "q", q_in);
        basis = set_reg(lay, basis, "qstar", qs);

        basis = run_classical(set_bc_gates, basis);
        BCType bc = classify_bc(n, qs, g);
        CHECK(get_reg(lay, basis, "bc") == static_cast<int>(bc));

        basis = run_classical(stream_gates, basis);
        Destination d = stream_destination(n, qs, bc, g);
        CHECK(get_reg(lay, basis, "nx") == d.n.x);
        CHECK(get_reg(lay, basis, "ny") == d.n.y);
        CHECK(get_reg(lay, basis, "q") == d.q);
        CHECK(get_reg(lay, basis, "qstar") == q_in);  // registers swapped

        basis = run_classical(unset_gates, basis);
        if (value_carrying(g, n, qs)) CHECK(get_reg(lay, basis, "bc") == 0);
      }
}

}  // namespace

TEST_CASE("setBC, streaming and unsetBC route every pair as the matrices do") {
  check_oracle_routing(Geometry(8, 8));
  check_oracle_routing(Geometry::with_default_obstacle(8, 8));
  check_oracle_routing(Geometry(4, 4));
  check_oracle_routing(Geometry(8, 4, Obstacle{2, 1, 1, 2}));
  check_oracle_routing(Geometry(4, 8, Obstacle{1, 2, 1, 3}));
  check_oracle_routing(Geometry::with_default_obstacle(16, 8));
}

TEST_CASE("setBC pinned basis states") {
  Geometry g(8, 8);
  RegisterLayout lay = ua_layout(g);
  auto gates = build_OsetBC(lay, g);
  auto bc_of = [&](int x, int y, int qs) {
    std::uint64_t b = 0;
    b = set_reg(lay, b, "nx", x);
    b = set_reg(lay, b, "ny", y);
    b = set_reg(lay, b, "qstar", qs);
    return get_reg(lay, run_classical(gates, b), "bc");
  };
  CHECK(bc_of(0, 4, d2q9::kL) == 0b11);
  CHECK(bc_of(7, 2, 3) == 0b10);
  CHECK(bc_of(3, 3, d2q9::kU) == 0b00);
}

TEST_CASE("streaming pinned basis states") {
  Geometry g(8, 8);
  RegisterLayout lay = ua_layout(g);
  auto gates = build_Ostreaming(lay);
  auto route = [&](int x, int y, int qs, int bc) {
    std::uint64_t b = 0;
    b = set_reg(lay, b, "nx", x);
    b = set_reg(lay, b, "ny", y);
    b = set_reg(lay, b, "qstar", qs);
    b = set_reg(lay, b, "bc", bc);
    b = run_classical(gates, b);
    return std::array<int, 3>{get_reg(lay, b, "nx"), get_reg(lay, b, "ny"),
                              get_reg(lay, b, "q")};
  };
  CHECK(route(3, 3, 2, 0b00) == std::array<int, 3>{4, 3, 2});
  CHECK(route(0, 4, 9, 0b11) == std::array<int, 3>{0, 4, 6});
  CHECK(route(7, 4, 7, 0b10) == std::array<int, 3>{7, 3, 5});
}

TEST_CASE("collision angle for the (R, L) pair is -pi/3 in U_A mode") {
  Geometry g(8, 8);
  FlowParams p = FlowParams::derive(1.0, 0.01, 0.5, 32, 1, 8);
  RegisterLayout lay = ua_layout(g);
  CollisionTable t = collision_table(p.tau, IndexMode::Physical);
  auto gates = build_Ocollision(lay, g, t, 1.0, t.max_abs());
  bool found = false;
  for (const Gate& gate : gates) {
    if (gate.kind != GateKind::RY) continue;
    // controls: q == L (1), qstar == R (2)
    bool match = true;
    for (int b = 0; b < 4; ++b) {
      for (const Control& c : gate.controls) {
        if (c.qubit == lay.qubit("q", b) && c.positive != (((1 >> b) & 1) != 0)) match = false;
        if (c.qubit == lay.qubit("qstar", b) && c.positive != (((2 >> b) & 1) != 0)) match = false;
      }
    }
    if (match && gate.controls.size() == 8) {
      CHECK(gate.angle == doctest::Approx(-std::numbers::pi / 3).epsilon(1e-14));
      found = true;
    }
  }
  CHECK(found);
}

TEST_CASE("U_A subnormalization and ancilla widths") {
  Geometry g(8, 8);
  FlowParams p = FlowParams::derive(1.0, 0.01, 0.5, 32, 1, 8);
  Circuit c = build_UA(g, p);
  CHECK(c.subnorm == doctest::Approx(11.136096603720079).epsilon(1e-14));
  CHECK(c.layout.num_qubits() - c.layout.system_qubits() == 7);  // qstar + bc + amp
}

TEST_CASE("U_A block equals the padded A at nx=ny=4") {
  Geometry g(4, 4);
  FlowParams p = FlowParams::derive(1.0, 0.01, 0.5, 4, 1, 4);
  Circuit c = build_UA(g, p);
  SparseMatrix a_pad = build_A(g, p, IndexMode::Padded);
  VerifyReport rep = verify(c, a_pad, c.subnorm, 1e-10);
  CHECK(rep.pass);
  CHECK(rep.max_abs_err <= 1e-10);
}

TEST_CASE("U_A block with an off-default obstacle at nx=8, ny=4") {
  Geometry g(8, 4, Obstacle{2, 1, 1, 2});
  FlowParams p = FlowParams::derive(1.0, 0.01, 0.5, 4, 1, 4);
  Circuit c = build_UA(g, p);
  SparseMatrix a_pad = build_A(g, p, IndexMode::Padded);
  VerifyReport rep = verify(c, a_pad, c.subnorm, 1e-10);
  CHECK(rep.pass);
}

TEST_CASE("U_L block equals the padded L at nx=ny=4, nt=2") {
  Geometry g(4, 4);
  FlowParams p = FlowParams::derive(1.0, 0.01, 0.5, 2, 1, 4);
  Circuit c = build_UL(g, p);
  CHECK(c.subnorm == doctest::Approx(32.0));
  GlobalSystem sys = assemble_system(g, p, IndexMode::Padded);
  VerifyReport rep = verify(c, sys.l, c.subnorm, 1e-10);
  CHECK(rep.pass);
  CHECK(rep.max_abs_err <= 1e-10);
}

TEST_CASE("U_L guards") {
  Geometry g(4, 4);
  FlowParams p = FlowParams::derive(1.0, 0.01, 0.5, 3, 1, 4);
  CHECK_THROWS_AS(build_UL(g, p), std::invalid_argument);  // nt not a power of two
  FlowParams p2 = FlowParams::derive(1.0, 0.01, 0.5, 4, 0, 4);
  CHECK_THROWS_AS(build_UL(g, p2), std::invalid_argument);  // W = 0
}

TEST_CASE("last block column contributes no subdiagonal entry") {
  Geometry g(4, 4);
  FlowParams p = FlowParams::derive(1.0, 0.01, 0.5, 2, 1, 4);
  GlobalSystem sys = assemble_system(g, p, IndexMode::Padded);
  // column block l = 2^W*nt - 1 has only the diagonal identity
  std::int64_t d = sys.d_c;
  SparseMatrix lt = sys.l.transposed();
  auto rp = lt.row_ptr();
  for (std::int64_t col = (sys.num_blocks - 1) * d; col < sys.dim(); ++col)
    CHECK(rp[col + 1] - rp[col] == 1);
}
