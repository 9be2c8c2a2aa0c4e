#include "qlbm/oracles.hpp"

#include <bit>
#include <cmath>
#include <stdexcept>

#include "qlbm/chebsolver.hpp"

namespace qlbm {

namespace {

int log2_exact(int v) {
  if (v < 1 || !std::has_single_bit(unsigned(v)))
    throw std::invalid_argument("log2_exact: power of two required");
  return std::countr_zero(unsigned(v));
}

/// Appends controls requiring register == value over all bits.
void ctrl_register_value(const RegisterLayout& lay, const std::string& name, int value,
                         std::vector<Control>& out) {
  const Register& r = lay.reg(name);
  for (int b = 0; b < r.width; ++b) out.push_back({r.offset + b, ((value >> b) & 1) != 0});
}

/// Controls for "register value lies in the aligned block [start, start+size)":
/// only the bits above log2(size) are fixed.
void ctrl_register_block(const RegisterLayout& lay, const std::string& name, int start, int size,
                         std::vector<Control>& out) {
  const Register& r = lay.reg(name);
  int low = log2_exact(size);
  for (int b = low; b < r.width; ++b) out.push_back({r.offset + b, ((start >> b) & 1) != 0});
}

struct Block {
  int start;
  int size;  // power of two, start aligned to size
};

/// Greedy dyadic decomposition of the inclusive range [lo, hi].
std::vector<Block> dyadic_blocks(int lo, int hi) {
  std::vector<Block> out;
  while (lo <= hi) {
    int size = lo == 0 ? std::bit_floor(unsigned(hi - lo + 1))
                       : std::min<unsigned>(unsigned(lo) & unsigned(-lo),
                                            std::bit_floor(unsigned(hi - lo + 1)));
    out.push_back({lo, size});
    lo += size;
  }
  return out;
}

struct Rect {
  int x_lo, x_hi, y_lo, y_hi;  // inclusive; empty when hi < lo
  bool empty() const { return x_hi < x_lo || y_hi < y_lo; }
};

/// Node rectangles where a move along c crosses the obstacle surface, i.e.
/// in_obstacle(n) xor in_obstacle(n + c).
std::vector<Rect> obstacle_crossing_rects(const Obstacle& o, Vec2i c) {
  const int x0 = o.x0, x1 = o.x0 + o.wx - 1;
  const int y0 = o.y0, y1 = o.y0 + o.wy - 1;
  std::vector<Rect> out;
  if (c.y == 0) {
    int enter_x = c.x > 0 ? x0 - 1 : x1 + 1;
    int exit_x = c.x > 0 ? x1 : x0;
    out.push_back({enter_x, enter_x, y0, y1});
    out.push_back({exit_x, exit_x, y0, y1});
  } else if (c.x == 0) {
    int enter_y = c.y > 0 ? y0 - 1 : y1 + 1;
    int exit_y = c.y > 0 ? y1 : y0;
    out.push_back({x0, x1, enter_y, enter_y});
    out.push_back({x0, x1, exit_y, exit_y});
  } else {
    int col_in = c.x > 0 ? x0 - 1 : x1 + 1;
    int col_out = c.x > 0 ? x1 : x0;
    int row_in = c.y > 0 ? y0 - 1 : y1 + 1;
    int row_out = c.y > 0 ? y1 : y0;
    int mx_lo = c.x > 0 ? x0 : x0 + 1;
    int mx_hi = c.x > 0 ? x1 - 1 : x1;
    out.push_back({col_in, col_in, y0 - c.y, y1 - c.y});
    out.push_back({mx_lo, mx_hi, row_in, row_in});
    out.push_back({col_out, col_out, y0, y1});
    out.push_back({mx_lo, mx_hi, row_out, row_out});
  }
  std::vector<Rect> filtered;
  for (const Rect& r : out)
    if (!r.empty()) filtered.push_back(r);
  return filtered;
}

/// Emits one multi-controlled X per bc bit in `bits` for every dyadic cell of
/// the rectangle, with the velocity-register pattern appended.
void emit_bc_flips(std::vector<Gate>& gates, const RegisterLayout& lay, const Rect& rect,
                   const std::string& vel_reg, int vel_value, std::vector<int> bc_bits,
                   const std::vector<Control>& extra) {
  for (const Block& xb : dyadic_blocks(rect.x_lo, rect.x_hi))
    for (const Block& yb : dyadic_blocks(rect.y_lo, rect.y_hi)) {
      std::vector<Control> ctrls = extra;
      ctrl_register_value(lay, vel_reg, vel_value, ctrls);
      ctrl_register_block(lay, "nx", xb.start, xb.size, ctrls);
      ctrl_register_block(lay, "ny", yb.start, yb.size, ctrls);
      for (int bit : bc_bits)
        gates.push_back({GateKind::X, {lay.qubit("bc", bit)}, 0.0, ctrls});
    }
}

}  // namespace

RegisterLayout ua_layout(const Geometry& geom) {
  RegisterLayout lay;
  lay.add("q", 4, true);
  lay.add("ny", log2_exact(geom.ny()), true);
  lay.add("nx", log2_exact(geom.nx()), true);
  lay.add("qstar", 4, false);
  lay.add("bc", 2, false);
  lay.add("amp", 1, false);
  return lay;
}

RegisterLayout ul_layout(const Geometry& geom, int nt, int w_idle) {
  RegisterLayout lay;
  lay.add("q", 4, true);
  lay.add("ny", log2_exact(geom.ny()), true);
  lay.add("nx", log2_exact(geom.nx()), true);
  lay.add("t", log2_exact(nt), true);
  lay.add("s", w_idle, true);
  lay.add("qstar", 4, false);
  lay.add("bc", 2, false);
  lay.add("in_l", 1, false);
  lay.add("amp", 1, false);
  lay.add("flag", 1, false);
  return lay;
}

std::vector<Gate> build_OsetBC(const RegisterLayout& lay, const Geometry& geom,
                               const std::vector<Control>& extra) {
  const int nx = geom.nx(), ny = geom.ny();
  std::vector<Gate> gates;
  auto flip_both = [&](std::vector<Control> ctrls) {
    gates.push_back({GateKind::X, {lay.qubit("bc", 0)}, 0.0, ctrls});
    gates.push_back({GateKind::X, {lay.qubit("bc", 1)}, 0.0, std::move(ctrls)});
  };
  auto pattern = [&](int q_star, std::initializer_list<std::pair<const char*, int>> regs) {
    std::vector<Control> ctrls = extra;
    ctrl_register_value(lay, "qstar", q_star, ctrls);
    for (auto& [name, value] : regs) ctrl_register_value(lay, name, value, ctrls);
    return ctrls;
  };

  // Bounce-back walls (physical velocity patterns only).
  for (int q : {d2q9::kL, d2q9::kDL, d2q9::kUL}) flip_both(pattern(q, {{"nx", 0}}));
  for (int q : {d2q9::kD, d2q9::kDL, d2q9::kDR}) flip_both(pattern(q, {{"ny", 0}}));
  for (int q : {d2q9::kU, d2q9::kUL, d2q9::kUR}) flip_both(pattern(q, {{"ny", ny - 1}}));
  // Corner double-fire corrections.
  flip_both(pattern(d2q9::kDL, {{"nx", 0}, {"ny", 0}}));
  flip_both(pattern(d2q9::kUL, {{"nx", 0}, {"ny", ny - 1}}));
  // Obstacle surface, both crossing directions.
  if (geom.obstacle())
    for (int q : d2q9::kPhysical) {
      if (q == d2q9::kRest) continue;
      for (const Rect& r : obstacle_crossing_rects(*geom.obstacle(), d2q9::velocity(q)))
        emit_bc_flips(gates, lay, r, "qstar", q, {0, 1}, extra);
    }

  // Outflow (bc[1] only): right boundary with c_x = +1 covers q* in
  // {2,6,10,14} in one two-literal velocity pattern.
  {
    std::vector<Control> ctrls = extra;
    ctrls.push_back({lay.qubit("qstar", 0), false});
    ctrls.push_back({lay.qubit("qstar", 1), true});
    ctrl_register_value(lay, "nx", nx - 1, ctrls);
    gates.push_back({GateKind::X, {lay.qubit("bc", 1)}, 0.0, std::move(ctrls)});
  }
  // Cancel at the corners where the wall bounce-back takes precedence.
  gates.push_back({GateKind::X,
                   {lay.qubit("bc", 1)},
                   0.0,
                   pattern(d2q9::kDR, {{"nx", nx - 1}, {"ny", 0}})});
  gates.push_back({GateKind::X,
                   {lay.qubit("bc", 1)},
                   0.0,
                   pattern(d2q9::kUR, {{"nx", nx - 1}, {"ny", ny - 1}})});
  // Extrapolation slots.
  for (int slot : {3, 7, 11})
    gates.push_back({GateKind::X, {lay.qubit("bc", 1)}, 0.0, pattern(slot, {{"nx", nx - 1}})});
  return gates;
}

std::vector<Gate> build_Ocollision(const RegisterLayout& lay, const Geometry& geom,
                                   const CollisionTable& table, double factor, double scale,
                                   const std::vector<Control>& extra) {
  if (table.mode != IndexMode::Physical)
    throw std::invalid_argument("build_Ocollision: physical-mode table expected");
  const int ny = geom.ny();
  std::vector<Gate> gates;
  const int amp = lay.qubit("amp", 0);
  auto encoded = [&](int q_star_phys, int q_phys) {
    double v = factor * table.c[d2q9::phys_position(q_star_phys)][d2q9::phys_position(q_phys)] /
               scale;
    if (std::abs(v) > 1.0)
      throw std::invalid_argument("build_Ocollision: encoded value exceeds 1 under this scale");
    return v;
  };
  // Main rotations over active velocity pairs.
  for (int qs : d2q9::kPhysical)
    for (int q : d2q9::kPhysical) {
      double v = encoded(qs, q);
      if (v == 0.0) continue;
      std::vector<Control> ctrls = extra;
      ctrl_register_value(lay, "q", q, ctrls);
      ctrl_register_value(lay, "qstar", qs, ctrls);
      gates.push_back({GateKind::RY, {amp}, 2.0 * std::asin(v), std::move(ctrls)});
    }
  // Outflow extrapolation loads at the non-physical slots, with the corner
  // masks realized as cancelling rotations.
  for (int slot : {3, 7, 11}) {
    int carried = 0;
    extrapolation_slot(slot, carried);
    for (int q : d2q9::kPhysical) {
      double v = encoded(carried, q);
      if (v == 0.0) continue;
      std::vector<Control> base = extra;
      ctrl_register_value(lay, "q", q, base);
      ctrl_register_value(lay, "qstar", slot, base);
      base.push_back({lay.qubit("bc", 0), false});
      base.push_back({lay.qubit("bc", 1), true});
      gates.push_back({GateKind::RY, {amp}, 2.0 * std::asin(v), base});
      if (slot == 7 || slot == 11) {
        std::vector<Control> mask = base;
        ctrl_register_value(lay, "ny", slot == 7 ? 0 : ny - 1, mask);
        gates.push_back({GateKind::RY, {amp}, -2.0 * std::asin(v), std::move(mask)});
      }
    }
  }
  return gates;
}

std::vector<Gate> build_Ostreaming(const RegisterLayout& lay, const std::vector<Control>& extra) {
  std::vector<Gate> gates;
  const int bc0 = lay.qubit("bc", 0), bc1 = lay.qubit("bc", 1);
  // Swap the velocity registers; q then holds the post-collision index.
  for (int b = 0; b < 4; ++b)
    gates.push_back({GateKind::Swap, {lay.qubit("q", b), lay.qubit("qstar", b)}, 0.0, extra});

  auto reg_targets = [&](const char* name) {
    const Register& r = lay.reg(name);
    std::vector<int> t;
    for (int b = 0; b < r.width; ++b) t.push_back(r.offset + b);
    return t;
  };
  auto with = [&](std::initializer_list<Control> cs) {
    std::vector<Control> ctrls = extra;
    ctrls.insert(ctrls.end(), cs);
    return ctrls;
  };
  // Coordinate shifts: x only for interior, y whenever bc[0] = 0.
  gates.push_back({GateKind::Inc, reg_targets("nx"), 0.0,
                   with({{lay.qubit("q", 1), true}, {bc0, false}, {bc1, false}})});
  gates.push_back({GateKind::Dec, reg_targets("nx"), 0.0,
                   with({{lay.qubit("q", 0), true}, {bc0, false}, {bc1, false}})});
  gates.push_back(
      {GateKind::Inc, reg_targets("ny"), 0.0, with({{lay.qubit("q", 3), true}, {bc0, false}})});
  gates.push_back(
      {GateKind::Dec, reg_targets("ny"), 0.0, with({{lay.qubit("q", 2), true}, {bc0, false}})});
  // Bounce-back bit swaps (the x pair is shared with outflow).
  gates.push_back(
      {GateKind::Swap, {lay.qubit("q", 0), lay.qubit("q", 1)}, 0.0, with({{bc1, true}})});
  gates.push_back(
      {GateKind::Swap, {lay.qubit("q", 2), lay.qubit("q", 3)}, 0.0, with({{bc0, true}})});
  // Outflow: exchange x patterns 10 <-> 11 after the swap.
  gates.push_back({GateKind::X, {lay.qubit("q", 1)}, 0.0, with({{bc1, true}, {bc0, false}})});
  return gates;
}

std::vector<Gate> build_OunsetBC(const RegisterLayout& lay, const Geometry& geom,
                                 const std::vector<Control>& extra) {
  const int nx = geom.nx(), ny = geom.ny();
  std::vector<Gate> gates;
  auto flip_both = [&](std::vector<Control> ctrls) {
    gates.push_back({GateKind::X, {lay.qubit("bc", 0)}, 0.0, ctrls});
    gates.push_back({GateKind::X, {lay.qubit("bc", 1)}, 0.0, std::move(ctrls)});
  };
  auto pattern = [&](int q_out, std::initializer_list<std::pair<const char*, int>> regs) {
    std::vector<Control> ctrls = extra;
    ctrl_register_value(lay, "q", q_out, ctrls);
    for (auto& [name, value] : regs) ctrl_register_value(lay, name, value, ctrls);
    return ctrls;
  };

  // Bounce-back signatures: reflected velocities point away from the surface.
  for (int q : {d2q9::kR, d2q9::kDR, d2q9::kUR}) flip_both(pattern(q, {{"nx", 0}}));
  for (int q : {d2q9::kU, d2q9::kUL, d2q9::kUR}) flip_both(pattern(q, {{"ny", 0}}));
  for (int q : {d2q9::kD, d2q9::kDL, d2q9::kDR}) flip_both(pattern(q, {{"ny", ny - 1}}));
  flip_both(pattern(d2q9::kUR, {{"nx", 0}, {"ny", 0}}));
  flip_both(pattern(d2q9::kDR, {{"nx", 0}, {"ny", ny - 1}}));
  if (geom.obstacle())
    for (int q : d2q9::kPhysical) {
      if (q == d2q9::kRest) continue;
      for (const Rect& r :
           obstacle_crossing_rects(*geom.obstacle(), d2q9::velocity(d2q9::opposite(q))))
        emit_bc_flips(gates, lay, r, "q", q, {0, 1}, extra);
    }

  // Outflow signatures (bc[1] only) at the right boundary.
  auto flip_out = [&](std::vector<Control> ctrls) {
    gates.push_back({GateKind::X, {lay.qubit("bc", 1)}, 0.0, std::move(ctrls)});
  };
  for (int q : {d2q9::kL, 13}) flip_out(pattern(q, {{"nx", nx - 1}}));
  flip_out(pattern(d2q9::kDL, {{"nx", nx - 1}}));
  flip_out(pattern(d2q9::kDL, {{"nx", nx - 1}, {"ny", ny - 1}}));  // corner mask
  flip_out(pattern(d2q9::kUL, {{"nx", nx - 1}}));
  flip_out(pattern(d2q9::kUL, {{"nx", nx - 1}, {"ny", 0}}));  // corner mask
  for (int q : {3, 7, 11, 12, 14, 15}) flip_out(pattern(q, {{"nx", nx - 1}}));
  return gates;
}

namespace {
void append_all(Circuit& c, std::vector<Gate> gs) {
  for (Gate& g : gs) c.append(std::move(g));
}

void append_inner_sequence(Circuit& c, const Geometry& geom, const CollisionTable& table,
                           double factor, double scale, const std::vector<Control>& extra) {
  append_all(c, build_OsetBC(c.layout, geom, extra));
  append_all(c, build_Ocollision(c.layout, geom, table, factor, scale, extra));
  append_all(c, build_Ostreaming(c.layout, extra));
  append_all(c, build_OunsetBC(c.layout, geom, extra));
}
}  // namespace

Circuit build_UA(const Geometry& geom, const FlowParams& params) {
  Circuit c;
  c.layout = ua_layout(geom);
  CollisionTable table = collision_table(params.tau, IndexMode::Physical);
  const double max_c = table.max_abs();
  c.subnorm = max_c * 16.0;
  for (int b = 0; b < 4; ++b) c.append({GateKind::H, {c.layout.qubit("qstar", b)}, 0.0, {}});
  append_inner_sequence(c, geom, table, 1.0, max_c, {});
  for (int b = 0; b < 4; ++b) c.append({GateKind::H, {c.layout.qubit("qstar", b)}, 0.0, {}});
  c.append({GateKind::X, {c.layout.qubit("amp", 0)}, 0.0, {}});
  return c;
}

Circuit build_UL(const Geometry& geom, const FlowParams& params) {
  if (params.w_idle < 1) throw std::invalid_argument("build_UL: W >= 1 required");
  if (!std::has_single_bit(unsigned(params.nt)))
    throw std::invalid_argument("build_UL: nt must be a power of two");
  Circuit c;
  c.layout = ul_layout(geom, params.nt, params.w_idle);
  const RegisterLayout& lay = c.layout;
  CollisionTable table = collision_table(params.tau, IndexMode::Physical);
  const double c_l = std::max(1.0, params.h * table.max_abs());
  c.subnorm = c_l * 32.0;

  const int in_l = lay.qubit("in_l", 0);
  const int amp = lay.qubit("amp", 0);
  const int flag = lay.qubit("flag", 0);
  auto qstar_is = [&](int v, std::vector<Control> ctrls) {
    ctrl_register_value(lay, "qstar", v, ctrls);
    return ctrls;
  };
  auto s_is_zero = [&](std::vector<Control> ctrls) {
    const Register& s = lay.reg("s");
    for (int b = 0; b < s.width; ++b) ctrls.push_back({s.offset + b, false});
    return ctrls;
  };

  c.append({GateKind::H, {in_l}, 0.0, {}});
  for (int b = 0; b < 4; ++b) c.append({GateKind::H, {lay.qubit("qstar", b)}, 0.0, {}});

  // Diagonal +I term.
  c.append({GateKind::RY, {amp}, 2.0 * std::asin(1.0 / c_l), qstar_is(0, {{in_l, false}})});
  // Evolution subdiagonal -(1-h)I term.
  c.append({GateKind::RY,
            {amp},
            2.0 * std::asin(-(1.0 - params.h) / c_l),
            s_is_zero(qstar_is(1, {{in_l, false}}))});
  // Evolution subdiagonal -hA term.
  append_inner_sequence(c, geom, table, -params.h, c_l, s_is_zero({{in_l, true}}));

  // Idling subdiagonal -I term, gated by flag = [s >= 1 and not last row].
  std::vector<Gate> flag_compute;
  flag_compute.push_back({GateKind::X, {flag}, 0.0, s_is_zero({})});
  flag_compute.push_back({GateKind::X, {flag}, 0.0, {}});
  {
    std::vector<Control> last_row;
    const Register& s = lay.reg("s");
    for (int b = 0; b < s.width; ++b) last_row.push_back({s.offset + b, true});
    const Register& t = lay.reg("t");
    for (int b = 0; b < t.width; ++b) last_row.push_back({t.offset + b, true});
    flag_compute.push_back({GateKind::X, {flag}, 0.0, std::move(last_row)});
  }
  for (const Gate& g : flag_compute) c.append(g);
  c.append({GateKind::RY,
            {amp},
            2.0 * std::asin(-1.0 / c_l),
            qstar_is(0, {{in_l, true}, {flag, true}})});
  for (auto it = flag_compute.rbegin(); it != flag_compute.rend(); ++it) c.append(*it);

  // Row shift l -> l+1 on the concatenated (t, s) counter.
  std::vector<int> counter;
  for (int b = 0; b < lay.reg("t").width; ++b) counter.push_back(lay.qubit("t", b));
  for (int b = 0; b < lay.reg("s").width; ++b) counter.push_back(lay.qubit("s", b));
  c.append({GateKind::Inc, counter, 0.0, {{in_l, true}}});
  c.append({GateKind::Inc, counter, 0.0, qstar_is(1, {{in_l, false}})});

  c.append({GateKind::H, {in_l}, 0.0, {}});
  for (int b = 0; b < 4; ++b) c.append({GateKind::H, {lay.qubit("qstar", b)}, 0.0, {}});
  c.append({GateKind::X, {amp}, 0.0, {}});
  return c;
}

}  // namespace qlbm
