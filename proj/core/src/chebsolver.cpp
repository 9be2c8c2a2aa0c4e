#include "qlbm/chebsolver.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace qlbm {

double ChebyshevPoly::evaluate(double x) const {
  double b1 = 0.0, b2 = 0.0;
  for (int j = degree; j >= 1; --j) {
    double b = coeffs[j] + 2.0 * x * b1 - b2;
    b2 = b1;
    b1 = b;
  }
  return coeffs[0] + x * b1 - b2;
}

ChebyshevPoly inverse_poly(double kappa, int degree) {
  if (kappa <= 1.0) throw std::invalid_argument("inverse_poly: kappa must exceed 1");
  if (degree < 1 || degree % 2 == 0)
    throw std::invalid_argument("inverse_poly: degree must be odd and >= 1");

  const int m = (degree + 1) / 2;
  const double a = 1.0 / (kappa * kappa);
  // |s(0)| for the affine map s(u) = (2u - 1 - a)/(1 - a) of [a,1] onto [-1,1];
  // acosh((1+a)/(1-a)) = 2 atanh(1/kappa).
  const double big_a = m * 2.0 * std::atanh(1.0 / kappa);
  const double r = big_a > 700.0 ? 0.0 : 1.0 / std::cosh(big_a);
  const double sign_m = (m % 2 == 0) ? 1.0 : -1.0;

  // Sample phi(w) = T_m((w-a)/(1-a)) / T_m(s(0)) at the m+1 Chebyshev root
  // nodes in w; an interpolant of a degree-m polynomial at m+1 nodes is exact.
  const int nn = m + 1;
  std::vector<double> phi(nn), theta(nn);
  for (int i = 0; i < nn; ++i) {
    theta[i] = std::numbers::pi * (i + 0.5) / nn;
    double w = std::cos(theta[i]);
    double xi = (w - a) / (1.0 - a);
    if (xi >= -1.0) {
      phi[i] = sign_m * std::cos(m * std::acos(std::min(xi, 1.0))) * r;
    } else {
      double big_b = m * std::acosh(-xi);
      double num = big_b > 350.0 ? 1.0 : 1.0 + std::exp(-2.0 * big_b);
      double den = big_a > 350.0 ? 1.0 : 1.0 + std::exp(-2.0 * big_a);
      phi[i] = std::exp(big_b - big_a) * num / den;
    }
  }

  // Chebyshev coefficients of phi in w via the cosine recurrence.
  std::vector<double> c(nn, 0.0);
  for (int i = 0; i < nn; ++i) {
    const double beta = std::cos(theta[i]);
    const double f = phi[i];
    double t_prev = 1.0, t_cur = beta;
    c[0] += f;
    if (m >= 1) c[1] += f * beta;
    for (int k = 2; k <= m; ++k) {
      double t_next = 2.0 * beta * t_cur - t_prev;
      c[k] += f * t_next;
      t_prev = t_cur;
      t_cur = t_next;
    }
  }
  for (int k = 0; k <= m; ++k) c[k] *= (k == 0 ? 1.0 : 2.0) / nn;

  // N(x) = 1 - phi(T_2(x)) = sum of even Chebyshev terms; divide by kappa*x.
  ChebyshevPoly p;
  p.kappa = kappa;
  p.degree = degree;
  p.coeffs.assign(static_cast<size_t>(degree) + 1, 0.0);
  auto n_even = [&](int l) { return l == 0 ? 1.0 - c[0] : -c[l]; };
  double above = 0.0;  // a_{2l+1}
  for (int l = m; l >= 1; --l) {
    double cur = 2.0 * n_even(l) / kappa - above;
    p.coeffs[2 * l - 1] = cur;
    above = cur;
  }
  double residual = std::abs(kappa * p.coeffs[1] / 2.0 - n_even(0));
  if (residual > 1e-7 * std::max(1.0, std::abs(n_even(0))))
    throw std::runtime_error("inverse_poly: division consistency check failed");
  return p;
}

double poly_sup_error(const ChebyshevPoly& poly) {
  const int n = 10000;
  const double lo = 1.0 / poly.kappa, hi = 1.0;
  const double mid = 0.5 * (hi + lo), half = 0.5 * (hi - lo);
  double worst = 0.0;
  // Chebyshev extrema grid: endpoint-inclusive, clustered where the
  // approximant equioscillates.
  for (int j = 0; j < n; ++j) {
    double x = mid + half * std::cos(std::numbers::pi * j / (n - 1));
    double err = std::abs(poly.evaluate(x) - 1.0 / (poly.kappa * x));
    worst = std::max(worst, err);
  }
  return worst;
}

namespace {
struct Dilation {
  const GlobalSystem& sys;
  double alpha;
  std::int64_t d;

  // out = [[0, L/a],[L^T/a, 0]] v
  void apply(const std::vector<double>& v, std::vector<double>& out) const {
    std::span<const double> lower(v.data() + d, static_cast<size_t>(d));
    std::span<const double> upper(v.data(), static_cast<size_t>(d));
    sys.l.matvec(lower, std::span<double>(out.data(), static_cast<size_t>(d)));
    sys.l_t.matvec(upper, std::span<double>(out.data() + d, static_cast<size_t>(d)));
    for (double& x : out) x /= alpha;
  }
};
}  // namespace

std::vector<double> clenshaw_apply(const GlobalSystem& sys, double alpha,
                                   const ChebyshevPoly& poly) {
  if (alpha <= 0.0) throw std::invalid_argument("clenshaw_apply: alpha must be positive");
  for (int j = 0; j <= poly.degree; j += 2)
    if (poly.coeffs[j] != 0.0)
      throw std::invalid_argument("clenshaw_apply: polynomial must be odd");

  const std::int64_t d = sys.dim();
  const size_t total = 2 * static_cast<size_t>(d);
  Dilation h{sys, alpha, d};

  std::vector<double> x(total, 0.0);
  for (std::int64_t i = 0; i < d; ++i) x[i] = sys.b_l[i];

  double coeff_scale = 0.0;
  for (double a : poly.coeffs) coeff_scale += std::abs(a);
  const double guard = 1e9 * (1.0 + norm2(x)) * (1.0 + coeff_scale);

  std::vector<double> y1(total, 0.0), y2(total, 0.0), cur(total), hy(total);
  for (size_t i = 0; i < total; ++i) y1[i] = poly.coeffs[poly.degree] * x[i];
  for (int j = poly.degree - 1; j >= 0; --j) {
    h.apply(y1, hy);
    const double aj = poly.coeffs[j];
    for (size_t i = 0; i < total; ++i) cur[i] = 2.0 * hy[i] + aj * x[i] - y2[i];
    std::swap(y2, y1);
    std::swap(y1, cur);
    if ((j & 63) == 0) {
      double n = norm2(y1);
      if (!std::isfinite(n) || n > guard)
        throw std::runtime_error(
            "clenshaw_apply: iterate blow-up, alpha is below sigma_max(L)");
    }
  }
  // result = y_0 - H y_1 with y_0 in y1 and y_1 in y2 after the final swap
  h.apply(y2, hy);
  std::vector<double> out(static_cast<size_t>(d));
  for (std::int64_t i = 0; i < d; ++i) out[i] = y1[d + i] - hy[d + i];
  return out;
}

double subnorm_c_l(const FlowParams& params) {
  CollisionTable t = collision_table(params.tau, IndexMode::Physical);
  return std::max(1.0, params.h * t.max_abs());
}

double subnorm_alpha_l(const FlowParams& params) {
  return subnorm_c_l(params) * 32.0;  // c_L * 2^{n_Q + 1}, n_Q = 4
}

}  // namespace qlbm
