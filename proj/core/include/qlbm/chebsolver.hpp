#pragma once

#include <vector>

#include "qlbm/timesystem.hpp"

namespace qlbm {

/// Odd Chebyshev-basis polynomial approximating 1/(kappa x) on [1/kappa, 1].
struct ChebyshevPoly {
  double kappa = 0.0;
  int degree = 0;                // odd
  std::vector<double> coeffs;    // a_0..a_degree, even entries exactly 0

  double evaluate(double x) const;  // Clenshaw in scalar form
};

/// Constructs the approximation from the residual polynomial of the
/// normal-equation Chebyshev iteration: with u = x^2 mapped from
/// [1/kappa^2, 1] onto [-1, 1] and m = (degree+1)/2,
///   P(x) = (1 - T_m(s(u)) / T_m(s(0))) / (kappa x),
/// an odd degree-(2m-1) polynomial whose relative error on [1/kappa, 1] is
/// bounded by 1/cosh(2 m atanh(1/kappa)) and which stays bounded by ~1 on
/// [-1, 1].
ChebyshevPoly inverse_poly(double kappa, int degree);

/// Max |P(x) - 1/(kappa x)| over 10^4 Chebyshev-spaced points on [1/kappa, 1].
double poly_sup_error(const ChebyshevPoly& poly);

/// Evaluates P_SV[L/alpha] b_L through the Clenshaw recurrence on the
/// Hermitian dilation [[0, L/alpha], [L^T/alpha, 0]], one sparse
/// matrix-vector product per degree. Requires alpha >= sigma_max(L).
std::vector<double> clenshaw_apply(const GlobalSystem& sys, double alpha,
                                   const ChebyshevPoly& poly);

/// Circuit subnormalization c_L = max(1, max_q h|C|) and alpha_L = c_L 2^{nQ+1}.
double subnorm_c_l(const FlowParams& params);
double subnorm_alpha_l(const FlowParams& params);

}  // namespace qlbm
