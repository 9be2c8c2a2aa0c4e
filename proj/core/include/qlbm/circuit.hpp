#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace qlbm {

enum class GateKind { H, X, Z, RY, Swap, Inc, Dec };

struct Control {
  int qubit;
  bool positive;
};

/// One gate: single target for H/X/Z/RY, a qubit pair for Swap, and the
/// qubit list of a register (LSB first) for the modular Inc/Dec.
struct Gate {
  GateKind kind;
  std::vector<int> targets;
  double angle = 0.0;  // RY only
  std::vector<Control> controls;
};

struct Register {
  std::string name;
  int offset;
  int width;
};

class RegisterLayout {
 public:
  int add(const std::string& name, int width, bool system);

  int num_qubits() const { return num_qubits_; }
  int system_qubits() const { return system_qubits_; }
  const std::vector<Register>& registers() const { return regs_; }

  const Register& reg(const std::string& name) const;
  bool has(const std::string& name) const;
  int qubit(const std::string& name, int bit) const;

 private:
  std::vector<Register> regs_;
  int num_qubits_ = 0;
  int system_qubits_ = 0;
};

struct Circuit {
  RegisterLayout layout;
  std::vector<Gate> gates;
  double subnorm = 1.0;

  void append(Gate g);
};

/// Applies a classical (permutation) gate to a computational basis state.
/// H and RY are rejected.
std::uint64_t apply_classical_gate(const Gate& g, std::uint64_t basis);

bool controls_satisfied(const Gate& g, std::uint64_t basis);

/// Line-based text export: one gate per line,
/// KIND target[,target2..][ @ angle][ | ctrl:+q ctrl:-q ..]
void write_circuit_text(const Circuit& c, std::ostream& os);
void write_circuit_text_file(const Circuit& c, const std::string& path);

}  // namespace qlbm
