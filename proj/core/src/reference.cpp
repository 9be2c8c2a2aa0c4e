#include "qlbm/reference.hpp"

#include <cmath>
#include <stdexcept>

namespace qlbm {

FlowParams FlowParams::derive(double re, double ma, double h, int nt, int w_idle, int ny) {
  if (re <= 0 || ma < 0) throw std::invalid_argument("FlowParams: Re > 0 and Ma >= 0 required");
  if (h < 0 || h > 1) throw std::invalid_argument("FlowParams: h must lie in [0,1]");
  if (nt < 1 || w_idle < 0) throw std::invalid_argument("FlowParams: nt >= 1, W >= 0 required");
  FlowParams p;
  p.re = re;
  p.ma = ma;
  p.h = h;
  p.nt = nt;
  p.w_idle = w_idle;
  const double cs = std::sqrt(kCs2);
  const double u_char = ma * cs;
  p.tau = u_char * ny / (kCs2 * re) + 0.5;
  p.u_in = {u_char, 0.0};
  return p;
}

Field rest_state(const Geometry& geom) {
  Field f(geom.nx(), geom.ny());
  for (int x = 0; x < geom.nx(); ++x)
    for (int y = 0; y < geom.ny(); ++y) {
      Vec2i n{x, y};
      if (geom.in_obstacle(n)) continue;
      for (int q : d2q9::kPhysical) f.at(n, q) = d2q9::weight(q);
    }
  return f;
}

std::array<double, 9> equilibrium(double rho, std::array<double, 2> u) {
  if (rho <= 0) throw std::domain_error("equilibrium: rho must be positive");
  std::array<double, 9> feq{};
  const double uu = u[0] * u[0] + u[1] * u[1];
  for (int i = 0; i < d2q9::kQPhys; ++i) {
    int q = d2q9::kPhysical[i];
    Vec2i c = d2q9::velocity(q);
    double uc = u[0] * c.x + u[1] * c.y;
    feq[i] = d2q9::weight(q) * rho * (1.0 + 3.0 * uc + 4.5 * uc * uc - 1.5 * uu);
  }
  return feq;
}

Macroscopics macroscopics(const Field& f) {
  Macroscopics m;
  m.nx = f.nx;
  m.ny = f.ny;
  size_t nodes = static_cast<size_t>(f.nx) * f.ny;
  m.rho.assign(nodes, 0.0);
  m.u.assign(nodes, {0.0, 0.0});
  m.zero_density.assign(nodes, 0);
  for (int x = 0; x < f.nx; ++x)
    for (int y = 0; y < f.ny; ++y) {
      Vec2i n{x, y};
      size_t k = m.node(n);
      double rho = 0.0, jx = 0.0, jy = 0.0;
      for (int q : d2q9::kPhysical) {
        double v = f.at(n, q);
        rho += v;
        Vec2i c = d2q9::velocity(q);
        jx += v * c.x;
        jy += v * c.y;
      }
      m.rho[k] = rho;
      if (rho == 0.0) {
        m.zero_density[k] = 1;
      } else {
        m.u[k] = {jx / rho, jy / rho};
      }
    }
  return m;
}

Field collide(const Field& f, double tau) {
  // tau = 1/2 (zero viscosity) only arises for zero inflow, where the rest
  // state is an exact fixed point.
  if (tau < 0.5) throw std::invalid_argument("collide: tau must be at least 1/2");
  Field out(f.nx, f.ny);
  for (int x = 0; x < f.nx; ++x)
    for (int y = 0; y < f.ny; ++y) {
      Vec2i n{x, y};
      double rho = 0.0, jx = 0.0, jy = 0.0;
      bool all_zero = true;
      for (int q : d2q9::kPhysical) {
        double v = f.at(n, q);
        if (v != 0.0) all_zero = false;
        rho += v;
        Vec2i c = d2q9::velocity(q);
        jx += v * c.x;
        jy += v * c.y;
      }
      if (all_zero) continue;  // sealed node, stays empty
      if (rho <= 0.0) throw std::runtime_error("collide: degenerate state, non-positive density");
      auto feq = equilibrium(rho, {jx / rho, jy / rho});
      for (int i = 0; i < d2q9::kQPhys; ++i) {
        int q = d2q9::kPhysical[i];
        double v = f.at(n, q);
        out.at(n, q) = v - (v - feq[i]) / tau;
      }
    }
  return out;
}

Field stream_with_bc(const Field& f_star, const Geometry& geom, const FlowParams& params) {
  Field out(f_star.nx, f_star.ny);
  const int nx = geom.nx();
  const int ny = geom.ny();
  for (int x = 0; x < nx; ++x)
    for (int y = 0; y < ny; ++y) {
      Vec2i n{x, y};
      for (int q : d2q9::kPhysical) {
        double v = f_star.at(n, q);
        switch (classify_bc(n, q, geom)) {
          case BCType::Interior: {
            Vec2i c = d2q9::velocity(q);
            out.at({x + c.x, y + c.y}, q) += v;
            break;
          }
          case BCType::BounceBack:
            out.at(n, d2q9::opposite(q)) += v;
            break;
          case BCType::Outflow:
            break;  // leaves the domain
        }
      }
    }
  // Moving-wall inflow forcing at the left boundary (rho_in ~ 1).
  for (int y = 0; y < ny; ++y)
    for (int q : {d2q9::kR, d2q9::kUR, d2q9::kDR}) {
      Vec2i c = d2q9::velocity(q);
      double uc = params.u_in[0] * c.x + params.u_in[1] * c.y;
      out.at({0, y}, q) += 2.0 * d2q9::weight(q) * uc / kCs2;
    }
  // Right-boundary outflow extrapolation from the upstream neighbour.
  for (int y = 0; y < ny; ++y) out.at({nx - 1, y}, d2q9::kL) = out.at({nx - 2, y}, d2q9::kL);
  for (int y = 1; y < ny; ++y) out.at({nx - 1, y}, d2q9::kUL) = out.at({nx - 2, y}, d2q9::kUL);
  for (int y = 0; y < ny - 1; ++y) out.at({nx - 1, y}, d2q9::kDL) = out.at({nx - 2, y}, d2q9::kDL);
  return out;
}

Field step_nonlinear(const Field& f, const Geometry& geom, const FlowParams& params) {
  Field streamed = stream_with_bc(collide(f, params.tau), geom, params);
  Field out(f.nx, f.ny);
  const double h = params.h;
  for (size_t i = 0; i < out.values.size(); ++i)
    out.values[i] = (1.0 - h) * f.values[i] + h * streamed.values[i];
  return out;
}

std::vector<Field> run_nonlinear(const Field& f0, const Geometry& geom, const FlowParams& params) {
  std::vector<Field> traj;
  traj.reserve(static_cast<size_t>(params.nt) + 1);
  traj.push_back(f0);
  for (int t = 0; t < params.nt; ++t) traj.push_back(step_nonlinear(traj.back(), geom, params));
  return traj;
}

std::vector<std::vector<double>> run_linear(const std::vector<double>& f0,
                                            const SparseMatrix& a_tilde,
                                            const std::vector<double>& b, int nt, double h) {
  if (a_tilde.nrows() != a_tilde.ncols() ||
      a_tilde.ncols() != static_cast<std::int64_t>(f0.size()) || f0.size() != b.size())
    throw std::invalid_argument("run_linear: dimension mismatch");
  std::vector<std::vector<double>> traj;
  traj.reserve(static_cast<size_t>(nt) + 1);
  traj.push_back(f0);
  for (int t = 0; t < nt; ++t) {
    std::vector<double> y = a_tilde.matvec(traj.back());
    for (size_t i = 0; i < y.size(); ++i) y[i] += h * b[i];
    traj.push_back(std::move(y));
  }
  return traj;
}

}  // namespace qlbm
