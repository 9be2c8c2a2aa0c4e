#pragma once

#include "qlbm/circuit.hpp"

namespace qlbm {

struct GateCounts {
  long long toffoli = 0;
  long long cnot = 0;
  long long x = 0;
  long long h = 0;
  long long ry = 0;
  long long z = 0;
  long long swap = 0;
  int qubits_total = 0;
  int qubits_ancilla = 0;
};

/// Rewrites every gate into {H, X, CNOT, Toffoli, RY, Z, SWAP}: k-controlled
/// X via an AND-ladder of 2(k-1) Toffolis and one CNOT on k-1 clean work
/// qubits, k-controlled RY via the ladder plus one controlled-RY (itself two
/// RY and two CNOT), controlled SWAP as three Toffoli-class gates, and the
/// modular incrementers as their multi-controlled X cascades. Negative
/// controls are conjugated by X pairs. A "work" register is appended.
Circuit lower(const Circuit& c);

/// Per-kind tally of a lowered circuit (lowers first when composite gates
/// remain).
GateCounts count_gates(const Circuit& c);

struct ResourceEstimate {
  double t_per_step = 0.0;  // T = nt*h of the estimated run
  double kappa_fit = 0.0;
  double degree = 0.0;
  double eps_gate = 0.0;
  double t_count = 0.0;
};

/// Fault-tolerant T-gate estimate for one QSVT solve of total time T:
/// kappa_fit = 4 T^{1.2} * 32, degree = c*kappa_fit + 1, eps_gate = eps_base/d,
/// N_T = N_Toffoli*d*7 + (N_RY*d + (d+1)) * 3 log2(1/eps_gate).
ResourceEstimate estimate_tgates(const GateCounts& counts, double total_time, double eps_base,
                                 double c);

}  // namespace qlbm
