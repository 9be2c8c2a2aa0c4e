#include "qlbm/spectral.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace qlbm {

namespace {
// Fixed, platform-stable pseudo-random start vector. The all-ones vector is
// unusable here: on y-symmetric geometries it is exactly orthogonal to the
// odd-parity singular subspace, which can hold the extremal singular vector.
std::vector<double> deterministic_start(std::int64_t n) {
  std::vector<double> v(static_cast<size_t>(n));
  std::uint64_t state = 0x9E3779B97F4A7C15ull ^ static_cast<std::uint64_t>(n);
  for (double& x : v) {
    state += 0x9E3779B97F4A7C15ull;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    z ^= z >> 31;
    x = static_cast<double>(z >> 11) * 0x1.0p-52 - 1.0;
  }
  double nn = norm2(v);
  for (double& x : v) x /= nn;
  return v;
}

void normalize(std::vector<double>& v) {
  double n = norm2(v);
  if (n == 0.0) throw std::runtime_error("power iteration: iterate collapsed to zero");
  for (double& x : v) x /= n;
}
}  // namespace

double sigma_max(const SparseMatrix& m, double tol, long* iters) {
  if (m.nnz() == 0) throw std::invalid_argument("sigma_max: zero matrix");
  SparseMatrix mt = m.transposed();
  std::vector<double> v = deterministic_start(m.ncols());
  std::vector<double> mv(static_cast<size_t>(m.nrows()));
  double theta = 0.0;
  for (long it = 1; it <= kSpectralIterCap; ++it) {
    m.matvec(v, mv);
    theta = dot(mv, mv);  // Rayleigh quotient of M^T M at unit v
    std::vector<double> bv = mt.matvec(mv);
    // For symmetric B the eigenvalue error is bounded by ||Bv - theta v||.
    double res = 0.0;
    for (size_t i = 0; i < bv.size(); ++i) res += (bv[i] - theta * v[i]) * (bv[i] - theta * v[i]);
    if (std::sqrt(res) <= tol * theta) {
      if (iters) *iters = it;
      return std::sqrt(theta);
    }
    v = std::move(bv);
    normalize(v);
  }
  throw std::runtime_error("sigma_max: no convergence after iteration cap, last estimate " +
                           std::to_string(std::sqrt(theta)));
}

double sigma_min(const GlobalSystem& sys, double tol, long* iters) {
  std::vector<double> v = deterministic_start(sys.dim());
  double theta = 0.0;
  for (long it = 1; it <= kSpectralIterCap; ++it) {
    std::vector<double> w = adjoint_solve(sys, v);  // L^{-T} v
    theta = dot(w, w);                              // Rayleigh quotient of L^{-1} L^{-T}
    std::vector<double> bv = forward_solve(sys, w);
    double res = 0.0;
    for (size_t i = 0; i < bv.size(); ++i) res += (bv[i] - theta * v[i]) * (bv[i] - theta * v[i]);
    if (std::sqrt(res) <= tol * theta) {
      if (iters) *iters = it;
      return 1.0 / std::sqrt(theta);
    }
    v = std::move(bv);
    normalize(v);
  }
  throw std::runtime_error("sigma_min: no convergence after iteration cap, last estimate " +
                           std::to_string(1.0 / std::sqrt(theta)));
}

double spectral_radius_estimate(const SparseMatrix& m, long iterations) {
  std::vector<double> v = deterministic_start(m.ncols());
  double rho = 0.0;
  for (long it = 0; it < iterations; ++it) {
    std::vector<double> w = m.matvec(v);
    rho = norm2(w);
    if (rho == 0.0) return 0.0;
    for (double& x : w) x /= rho;
    v = std::move(w);
  }
  return rho;
}

std::vector<SpectralReport> sweep(const std::vector<SweepPoint>& grid, double re, double ma,
                                  double h, int w_idle, bool use_obstacle, double tol) {
  if (grid.empty()) throw std::invalid_argument("sweep: empty grid");
  std::vector<SpectralReport> out;
  out.reserve(grid.size());
  for (const SweepPoint& p : grid) {
    Geometry geom = use_obstacle ? Geometry::with_default_obstacle(p.nx, p.nx)
                                 : Geometry(p.nx, p.nx);
    FlowParams params = FlowParams::derive(re, ma, h, p.nt, w_idle, geom.ny());
    GlobalSystem sys = assemble_system(geom, params, IndexMode::Physical);
    SpectralReport r;
    r.nx = p.nx;
    r.ny = p.nx;
    r.nt = p.nt;
    r.total_time = p.nt * h;
    r.sigma_max = sigma_max(sys.l, tol, &r.iterations_max);
    r.sigma_min = sigma_min(sys, tol, &r.iterations_min);
    r.kappa = r.sigma_max / r.sigma_min;
    r.tol_achieved = tol;
    out.push_back(r);
  }
  return out;
}

}  // namespace qlbm
