#include "qlbm/lowering.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace qlbm {

namespace {

bool is_primitive(const Gate& g) {
  switch (g.kind) {
    case GateKind::H:
    case GateKind::Z:
      return g.controls.empty();
    case GateKind::RY:
      return g.controls.empty();
    case GateKind::X:
      return g.controls.size() <= 2 &&
             std::all_of(g.controls.begin(), g.controls.end(),
                         [](const Control& c) { return c.positive; });
    case GateKind::Swap:
      return g.controls.empty();
    case GateKind::Inc:
    case GateKind::Dec:
      return false;
  }
  return false;
}

struct Lowerer {
  std::vector<Gate> out;
  int work_offset = 0;
  int work_used_max = 0;

  void emit(GateKind kind, std::vector<int> targets, double angle, std::vector<Control> ctrls) {
    out.push_back({kind, std::move(targets), angle, std::move(ctrls)});
  }

  // X-conjugates negative controls so the body sees positive ones only.
  template <class Body>
  void with_positive(const std::vector<Control>& ctrls, Body body) {
    std::vector<int> negs;
    std::vector<int> qubits;
    qubits.reserve(ctrls.size());
    for (const Control& c : ctrls) {
      qubits.push_back(c.qubit);
      if (!c.positive) negs.push_back(c.qubit);
    }
    for (int q : negs) emit(GateKind::X, {q}, 0.0, {});
    body(qubits);
    for (int q : negs) emit(GateKind::X, {q}, 0.0, {});
  }

  // AND-ladder of the (positive) controls into work qubits; returns the qubit
  // holding the conjunction and the ladder gates for later uncomputation.
  int ladder_compute(const std::vector<int>& ctrls, std::vector<Gate>& ladder) {
    int w = work_offset;
    emit(GateKind::X, {w}, 0.0, {{ctrls[0], true}, {ctrls[1], true}});
    ladder.push_back(out.back());
    for (size_t i = 2; i < ctrls.size(); ++i) {
      emit(GateKind::X, {w + 1}, 0.0, {{w, true}, {ctrls[i], true}});
      ladder.push_back(out.back());
      ++w;
    }
    work_used_max = std::max(work_used_max, w - work_offset + 1);
    return w;
  }

  void mcx(const std::vector<Control>& ctrls, int target) {
    with_positive(ctrls, [&](const std::vector<int>& pos) {
      if (pos.size() <= 2) {
        std::vector<Control> cs;
        for (int q : pos) cs.push_back({q, true});
        emit(GateKind::X, {target}, 0.0, std::move(cs));
        return;
      }
      std::vector<Gate> ladder;
      int top = ladder_compute(pos, ladder);
      emit(GateKind::X, {target}, 0.0, {{top, true}});
      for (auto it = ladder.rbegin(); it != ladder.rend(); ++it) out.push_back(*it);
    });
  }

  void controlled_ry(int ctrl, int target, double angle) {
    emit(GateKind::RY, {target}, angle / 2.0, {});
    emit(GateKind::X, {target}, 0.0, {{ctrl, true}});
    emit(GateKind::RY, {target}, -angle / 2.0, {});
    emit(GateKind::X, {target}, 0.0, {{ctrl, true}});
  }

  void mcry(const std::vector<Control>& ctrls, int target, double angle) {
    if (ctrls.empty()) {
      emit(GateKind::RY, {target}, angle, {});
      return;
    }
    with_positive(ctrls, [&](const std::vector<int>& pos) {
      if (pos.size() == 1) {
        controlled_ry(pos[0], target, angle);
        return;
      }
      std::vector<Gate> ladder;
      int top = ladder_compute(pos, ladder);
      controlled_ry(top, target, angle);
      for (auto it = ladder.rbegin(); it != ladder.rend(); ++it) out.push_back(*it);
    });
  }

  void lower_gate(const Gate& g) {
    switch (g.kind) {
      case GateKind::H:
        if (!g.controls.empty()) throw std::invalid_argument("lower: controlled H unsupported");
        out.push_back(g);
        return;
      case GateKind::Z:
        if (!g.controls.empty()) throw std::invalid_argument("lower: controlled Z unsupported");
        out.push_back(g);
        return;
      case GateKind::RY:
        mcry(g.controls, g.targets[0], g.angle);
        return;
      case GateKind::X:
        if (g.controls.size() <= 2 &&
            std::all_of(g.controls.begin(), g.controls.end(),
                        [](const Control& c) { return c.positive; })) {
          out.push_back(g);
        } else {
          mcx(g.controls, g.targets[0]);
        }
        return;
      case GateKind::Swap:
        if (g.controls.empty()) {
          out.push_back(g);
        } else {
          // Three Toffoli-class gates: CX(a,b) CX(b,a) CX(a,b) with the
          // external controls attached to each.
          std::vector<Control> ca = g.controls, cb = g.controls;
          ca.push_back({g.targets[0], true});
          cb.push_back({g.targets[1], true});
          mcx(ca, g.targets[1]);
          mcx(cb, g.targets[0]);
          mcx(ca, g.targets[1]);
        }
        return;
      case GateKind::Inc:
      case GateKind::Dec: {
        const bool inc = g.kind == GateKind::Inc;
        const int m = static_cast<int>(g.targets.size());
        for (int j = m - 1; j >= 1; --j) {
          std::vector<Control> cs = g.controls;
          for (int b = 0; b < j; ++b) cs.push_back({g.targets[b], inc});
          mcx(cs, g.targets[j]);
        }
        if (g.controls.empty()) {
          emit(GateKind::X, {g.targets[0]}, 0.0, {});
        } else {
          mcx(g.controls, g.targets[0]);
        }
        return;
      }
    }
  }
};

}  // namespace

Circuit lower(const Circuit& c) {
  // First pass sizes the work register.
  int max_ctrls = 0;
  for (const Gate& g : c.gates) {
    int k = static_cast<int>(g.controls.size());
    switch (g.kind) {
      case GateKind::Swap:
        if (k > 0) max_ctrls = std::max(max_ctrls, k + 1);
        break;
      case GateKind::Inc:
      case GateKind::Dec:
        max_ctrls = std::max(max_ctrls, k + static_cast<int>(g.targets.size()) - 1);
        break;
      default:
        max_ctrls = std::max(max_ctrls, k);
    }
  }
  const int work = std::max(0, max_ctrls - 1);

  Circuit low;
  low.layout = c.layout;
  low.subnorm = c.subnorm;
  if (work > 0) low.layout.add("work", work, false);

  Lowerer lw;
  lw.work_offset = low.layout.has("work") ? low.layout.reg("work").offset : 0;
  for (const Gate& g : c.gates) {
    if (is_primitive(g)) {
      lw.out.push_back(g);
    } else {
      lw.lower_gate(g);
    }
  }
  low.gates = std::move(lw.out);
  return low;
}

GateCounts count_gates(const Circuit& c) {
  bool lowered = true;
  for (const Gate& g : c.gates)
    if (!is_primitive(g)) {
      lowered = false;
      break;
    }
  Circuit tmp;
  if (!lowered) tmp = lower(c);
  const Circuit& lc = lowered ? c : tmp;

  GateCounts n;
  for (const Gate& g : lc.gates) {
    switch (g.kind) {
      case GateKind::H: ++n.h; break;
      case GateKind::Z: ++n.z; break;
      case GateKind::RY: ++n.ry; break;
      case GateKind::Swap: ++n.swap; break;
      case GateKind::X:
        if (g.controls.size() == 2)
          ++n.toffoli;
        else if (g.controls.size() == 1)
          ++n.cnot;
        else
          ++n.x;
        break;
      default:
        throw std::logic_error("count_gates: composite gate after lowering");
    }
  }
  n.qubits_total = lc.layout.num_qubits();
  n.qubits_ancilla = lc.layout.num_qubits() - lc.layout.system_qubits();
  return n;
}

ResourceEstimate estimate_tgates(const GateCounts& counts, double total_time, double eps_base,
                                 double c) {
  if (total_time <= 0) throw std::invalid_argument("estimate_tgates: T must be positive");
  ResourceEstimate r;
  r.t_per_step = total_time;
  r.kappa_fit = 4.0 * std::pow(total_time, 1.2) * 32.0;
  r.degree = c * r.kappa_fit + 1.0;
  r.eps_gate = eps_base / r.degree;
  const double rot_t = 3.0 * std::log2(1.0 / r.eps_gate);
  r.t_count = static_cast<double>(counts.toffoli) * r.degree * 7.0 +
              (static_cast<double>(counts.ry) * r.degree + (r.degree + 1.0)) * rot_t;
  return r;
}

}  // namespace qlbm
