#pragma once

#include <vector>

#include "qlbm/timesystem.hpp"

namespace qlbm {

struct SpectralReport {
  int nx = 0;
  int ny = 0;
  int nt = 0;
  double total_time = 0.0;  // T = nt * h
  double sigma_max = 0.0;
  double sigma_min = 0.0;
  double kappa = 0.0;
  long iterations_max = 0;
  long iterations_min = 0;
  double tol_achieved = 0.0;
};

inline constexpr double kSpectralTol = 1e-8;
inline constexpr long kSpectralIterCap = 100000;

/// Largest singular value by power iteration on M^T M from a fixed
/// deterministic start vector, stopping when the symmetric-eigenvalue
/// residual bound drops below tol. Throws after the iteration cap, reporting
/// the last estimate.
double sigma_max(const SparseMatrix& m, double tol = kSpectralTol, long* iters = nullptr);

/// Smallest singular value of L by power iteration on L^{-1} L^{-T}, using
/// the block forward/backward substitutions (no factorization).
double sigma_min(const GlobalSystem& sys, double tol = kSpectralTol, long* iters = nullptr);

/// Spectral-radius estimate of a square matrix by plain power iteration.
double spectral_radius_estimate(const SparseMatrix& m, long iterations = 20000);

struct SweepPoint {
  int nx;
  int nt;
};

/// One report per (nx, nt) grid point; ny = nx, default obstacle when
/// use_obstacle is set, physical index mode.
std::vector<SpectralReport> sweep(const std::vector<SweepPoint>& grid, double re, double ma,
                                  double h, int w_idle, bool use_obstacle,
                                  double tol = kSpectralTol);

}  // namespace qlbm
