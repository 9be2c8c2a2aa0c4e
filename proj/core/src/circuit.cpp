#include "qlbm/circuit.hpp"

#include <cmath>
#include <fstream>
#include <ostream>
#include <stdexcept>

namespace qlbm {

int RegisterLayout::add(const std::string& name, int width, bool system) {
  if (width < 0) throw std::invalid_argument("RegisterLayout: negative width");
  if (has(name)) throw std::invalid_argument("RegisterLayout: duplicate register " + name);
  if (system && system_qubits_ != num_qubits_)
    throw std::invalid_argument("RegisterLayout: system registers must precede ancillas");
  int off = num_qubits_;
  regs_.push_back({name, off, width});
  num_qubits_ += width;
  if (system) system_qubits_ = num_qubits_;
  return off;
}

const Register& RegisterLayout::reg(const std::string& name) const {
  for (const Register& r : regs_)
    if (r.name == name) return r;
  throw std::invalid_argument("RegisterLayout: unknown register " + name);
}

bool RegisterLayout::has(const std::string& name) const {
  for (const Register& r : regs_)
    if (r.name == name) return true;
  return false;
}

int RegisterLayout::qubit(const std::string& name, int bit) const {
  const Register& r = reg(name);
  if (bit < 0 || bit >= r.width) throw std::out_of_range("RegisterLayout: bit out of range");
  return r.offset + bit;
}

void Circuit::append(Gate g) {
  if (g.targets.empty()) throw std::invalid_argument("Gate: no target");
  for (int t : g.targets) {
    if (t < 0 || t >= layout.num_qubits()) throw std::invalid_argument("Gate: target out of range");
    for (const Control& c : g.controls)
      if (c.qubit == t) throw std::invalid_argument("Gate: control coincides with target");
  }
  for (const Control& c : g.controls)
    if (c.qubit < 0 || c.qubit >= layout.num_qubits())
      throw std::invalid_argument("Gate: control out of range");
  if (!std::isfinite(g.angle)) throw std::invalid_argument("Gate: non-finite angle");
  gates.push_back(std::move(g));
}

bool controls_satisfied(const Gate& g, std::uint64_t basis) {
  for (const Control& c : g.controls) {
    bool bit = (basis >> c.qubit) & 1;
    if (bit != c.positive) return false;
  }
  return true;
}

std::uint64_t apply_classical_gate(const Gate& g, std::uint64_t basis) {
  if (!controls_satisfied(g, basis)) return basis;
  switch (g.kind) {
    case GateKind::X:
      return basis ^ (std::uint64_t(1) << g.targets[0]);
    case GateKind::Z:
      return basis;
    case GateKind::Swap: {
      bool a = (basis >> g.targets[0]) & 1;
      bool b = (basis >> g.targets[1]) & 1;
      if (a == b) return basis;
      return basis ^ (std::uint64_t(1) << g.targets[0]) ^ (std::uint64_t(1) << g.targets[1]);
    }
    case GateKind::Inc:
    case GateKind::Dec: {
      const int m = static_cast<int>(g.targets.size());
      std::uint64_t v = 0;
      for (int i = 0; i < m; ++i) v |= ((basis >> g.targets[i]) & 1) << i;
      v = (v + (g.kind == GateKind::Inc ? 1 : (std::uint64_t(1) << m) - 1)) &
          ((std::uint64_t(1) << m) - 1);
      std::uint64_t out = basis;
      for (int i = 0; i < m; ++i) {
        out &= ~(std::uint64_t(1) << g.targets[i]);
        out |= ((v >> i) & 1) << g.targets[i];
      }
      return out;
    }
    default:
      throw std::invalid_argument("apply_classical_gate: non-classical gate");
  }
}

namespace {
const char* kind_name(GateKind k) {
  switch (k) {
    case GateKind::H: return "H";
    case GateKind::X: return "X";
    case GateKind::Z: return "Z";
    case GateKind::RY: return "RY";
    case GateKind::Swap: return "SWAP";
    case GateKind::Inc: return "INC+";
    case GateKind::Dec: return "INC-";
  }
  return "?";
}
}  // namespace

void write_circuit_text(const Circuit& c, std::ostream& os) {
  for (const Register& r : c.layout.registers())
    os << "# reg " << r.name << " offset=" << r.offset << " width=" << r.width << "\n";
  os << "# subnorm " << c.subnorm << "\n";
  char buf[64];
  for (const Gate& g : c.gates) {
    os << kind_name(g.kind) << " ";
    for (size_t i = 0; i < g.targets.size(); ++i) os << (i ? "," : "") << g.targets[i];
    if (g.kind == GateKind::RY) {
      std::snprintf(buf, sizeof buf, " @ %.17g", g.angle);
      os << buf;
    }
    if (!g.controls.empty()) {
      os << " |";
      for (const Control& ct : g.controls)
        os << " ctrl:" << (ct.positive ? '+' : '-') << ct.qubit;
    }
    os << "\n";
  }
}

void write_circuit_text_file(const Circuit& c, const std::string& path) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open " + path);
  write_circuit_text(c, os);
}

}  // namespace qlbm
