#pragma once

#include <array>
#include <optional>
#include <vector>

#include "qlbm/lattice.hpp"
#include "qlbm/reference.hpp"
#include "qlbm/sparse.hpp"

namespace qlbm {

/// Velocity-index space of the assembled operators: the physical 9-velocity
/// space, or the padded 16-velocity space that mirrors the circuit routing.
enum class IndexMode { Physical, Padded };

int velocities_per_node(IndexMode mode);

/// Vector index of (node, velocity) in the given mode.
std::int64_t state_index(const Geometry& geom, Vec2i n, int q, IndexMode mode);

/// State dimension Q*nx*ny.
std::int64_t state_dim(const Geometry& geom, IndexMode mode);

/// Collision table C = I + F1, C[q*][q] = (1-1/tau) delta + (w_{q*}/tau)(1 + 3 c_q.c_{q*}).
/// In padded mode rows/columns at non-physical indices are zero.
struct CollisionTable {
  double tau = 0.0;
  IndexMode mode = IndexMode::Physical;
  std::vector<std::vector<double>> c;  // [q*][q], dense Q x Q

  double max_abs() const;  // (4/9)/tau
};

CollisionTable collision_table(double tau, IndexMode mode);

/// Streaming destination of a post-collision pair (n, q*) under the circuit
/// routing, with modular wrap-around of the coordinate shifts.
struct Destination {
  Vec2i n;
  int q;
};
Destination stream_destination(Vec2i n, int q_star, BCType bc, const Geometry& geom);

/// Outflow extrapolation slots at the right boundary: (slot, carried velocity)
/// = (3, L), (7, DL), (11, UL). The slot at a corner whose shifted target
/// would leave the domain is masked (carries no value).
bool extrapolation_slot(int slot, int& carried_q);
bool extrapolation_slot_masked(Vec2i n, int slot, const Geometry& geom);

/// Streaming matrix. Physical mode: columns of outflow-classified sources are
/// empty; right-boundary columns of the left-pointing velocities additionally
/// carry the extrapolation copy, so they hold two unit entries. Padded mode:
/// a true permutation on 16*nx*ny indices that reproduces the circuit routing
/// on every value-carrying pair.
SparseMatrix build_S(const Geometry& geom, IndexMode mode);

/// Inflow forcing vector: 2 w_q (u_in . c_q)/c_s^2 at left-boundary nodes for
/// q in {R, UR, DR}, zero elsewhere.
std::vector<double> build_forcing(const Geometry& geom, const FlowParams& params,
                                  IndexMode mode = IndexMode::Physical);

/// First-order collision-streaming matrix A = S (I + F1), including the
/// right-boundary extrapolation rows.
SparseMatrix build_A(const Geometry& geom, const FlowParams& params, IndexMode mode);

/// A_tilde = (1-h) I + h A.
SparseMatrix interpolate(const SparseMatrix& a, double h);

/// Embedding/projection between physical and padded state vectors.
std::vector<double> embed_padded(const Geometry& geom, const std::vector<double>& phys);
std::vector<double> project_physical(const Geometry& geom, const std::vector<double>& padded);

/// Project a padded-mode square matrix onto the physical index space.
SparseMatrix project_matrix_physical(const Geometry& geom, const SparseMatrix& padded);

/// Field <-> flat physical state vector.
std::vector<double> field_to_vector(const Field& f);
Field vector_to_field(const Geometry& geom, const std::vector<double>& v);

}  // namespace qlbm
