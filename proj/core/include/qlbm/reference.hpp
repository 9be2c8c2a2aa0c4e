#pragma once

#include <array>
#include <vector>

#include "qlbm/lattice.hpp"
#include "qlbm/sparse.hpp"

namespace qlbm {

/// Flow parameters in lattice units. tau is derived from Re and Ma with the
/// channel width ny as characteristic length and U = Ma*c_s as characteristic
/// velocity: tau = U*ny/(c_s^2*Re) + 1/2.
struct FlowParams {
  double re = 1.0;
  double ma = 0.01;
  double tau = 0.0;
  double h = 0.5;
  std::array<double, 2> u_in{0.0, 0.0};
  int nt = 32;
  int w_idle = 1;

  static FlowParams derive(double re, double ma, double h, int nt, int w_idle, int ny);
};

/// Distribution-function field, layout index = (n_x*ny + n_y)*9 + q_pos with
/// q_pos the position of the velocity in ascending physical-index order.
struct Field {
  int nx = 0;
  int ny = 0;
  std::vector<double> values;

  Field() = default;
  Field(int nx_, int ny_) : nx(nx_), ny(ny_), values(static_cast<size_t>(nx_) * ny_ * 9, 0.0) {}

  double& at(Vec2i n, int q) { return values[idx(n, q)]; }
  double at(Vec2i n, int q) const { return values[idx(n, q)]; }
  size_t idx(Vec2i n, int q) const {
    return (static_cast<size_t>(n.x) * ny + n.y) * 9 + d2q9::phys_position(q);
  }
};

/// Rest state f_q = w_q at fluid nodes, zero inside the obstacle.
Field rest_state(const Geometry& geom);

struct Macroscopics {
  int nx = 0;
  int ny = 0;
  std::vector<double> rho;                   // per node
  std::vector<std::array<double, 2>> u;      // per node
  std::vector<std::uint8_t> zero_density;    // per node flag
  size_t node(Vec2i n) const { return static_cast<size_t>(n.x) * ny + n.y; }
};

/// Equilibrium distribution for one node. Requires rho > 0.
std::array<double, 9> equilibrium(double rho, std::array<double, 2> u);

Macroscopics macroscopics(const Field& f);

/// BGK collision. Nodes whose populations are identically zero pass through
/// unchanged (sealed obstacle interior); any other non-positive density is a
/// degenerate state.
Field collide(const Field& f, double tau);

/// Streaming with boundary handling: interior advection, halfway bounce-back,
/// moving-wall inflow forcing at the left boundary, and right-boundary
/// extrapolation of the left-pointing populations. Corner populations whose
/// extrapolated destination leaves the domain are discarded.
Field stream_with_bc(const Field& f_star, const Geometry& geom, const FlowParams& params);

/// One interpolated step f(t+h) = (1-h) f(t) + h stream(collide(f(t))).
Field step_nonlinear(const Field& f, const Geometry& geom, const FlowParams& params);

/// Full nonlinear trajectory, nt+1 fields including the initial state.
std::vector<Field> run_nonlinear(const Field& f0, const Geometry& geom, const FlowParams& params);

/// Linear recurrence y(t+h) = A_tilde y(t) + h b, nt+1 states.
std::vector<std::vector<double>> run_linear(const std::vector<double>& f0,
                                            const SparseMatrix& a_tilde,
                                            const std::vector<double>& b, int nt, double h);

}  // namespace qlbm
