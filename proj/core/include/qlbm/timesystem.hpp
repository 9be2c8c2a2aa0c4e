#pragma once

#include <cstdint>
#include <vector>

#include "qlbm/carleman.hpp"
#include "qlbm/sparse.hpp"

namespace qlbm {

/// Global block-bidiagonal system L y = b_L over 2^W * nt blocks of size d_c.
/// Block row 0 is the identity; rows 1..nt carry -A_tilde on the subdiagonal
/// (evolution); the remaining rows carry -I (idling).
struct GlobalSystem {
  SparseMatrix l;          // explicit L
  SparseMatrix l_t;        // L transposed
  SparseMatrix a_tilde;    // evolution block
  SparseMatrix a_tilde_t;  // its transpose
  std::vector<double> b_l;
  std::vector<double> b;   // per-block forcing (unscaled)
  std::vector<double> y0;
  std::int64_t d_c = 0;
  std::int64_t num_blocks = 0;  // 2^W * nt
  int nt = 0;
  int w_idle = 0;
  double h = 0.0;
  IndexMode mode = IndexMode::Physical;

  std::int64_t dim() const { return d_c * num_blocks; }
  bool degenerate() const { return num_blocks == 1; }
};

GlobalSystem assemble(const SparseMatrix& a_tilde, const std::vector<double>& b,
                      const std::vector<double>& y0, int nt, int w_idle, double h,
                      IndexMode mode = IndexMode::Physical);

/// Convenience builder from geometry and flow parameters (rest initial state).
GlobalSystem assemble_system(const Geometry& geom, const FlowParams& params, IndexMode mode);

/// Exact solve of L y = b_L by block forward substitution.
std::vector<double> forward_solve(const GlobalSystem& sys);
/// Exact solve of L y = rhs for an arbitrary right-hand side.
std::vector<double> forward_solve(const GlobalSystem& sys, const std::vector<double>& rhs);

/// w = L^T v.
std::vector<double> adjoint_apply(const GlobalSystem& sys, const std::vector<double>& v);
/// Exact solve of L^T x = v by block backward substitution.
std::vector<double> adjoint_solve(const GlobalSystem& sys, const std::vector<double>& v);

/// k-th d_c block of a global vector.
std::vector<double> extract_block(const GlobalSystem& sys, const std::vector<double>& y,
                                  std::int64_t k);

/// Relative l2 error |u - v| / |v|. Throws for v = 0.
double relative_error(const std::vector<double>& u, const std::vector<double>& v);

}  // namespace qlbm
