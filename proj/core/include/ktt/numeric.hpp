#pragma once

#include <functional>
#include <span>
#include <vector>

namespace ktt::numeric {

inline constexpr double euler_gamma = 0.57721566490153286060651209008240243;

// Special functions. All are accurate to a few ulp of 1e-15 over the ranges
// the kernels use; erf/erfc/lgamma come from <cmath>.

/// Regularized lower incomplete gamma P(a, x), a > 0, x >= 0.
double gamma_p(double a, double x);
/// Regularized upper incomplete gamma Q(a, x) = 1 - P(a, x).
double gamma_q(double a, double x);
/// Regularized incomplete beta I_x(a, b), a, b > 0, 0 <= x <= 1.
double beta_inc(double a, double b, double x);
/// Standard normal CDF.
double normal_cdf(double z);

struct QuadratureResult {
  double value = 0.0;
  double error = 0.0;
  bool converged = false;
};

struct QuadratureOptions {
  double abs_tol = 1e-13;
  double rel_tol = 1e-12;
  int max_intervals = 4000;
};

/// Globally adaptive Gauss-Kronrod (7/15) quadrature over [a, b]. Optional
/// interior breakpoints seed the initial partition.
QuadratureResult integrate(const std::function<double(double)>& f, double a, double b,
                           const QuadratureOptions& opts = {}, std::span<const double> breakpoints = {});

struct QuadRule {
  std::vector<double> nodes;    // on [-1, 1]
  std::vector<double> weights;
};

/// n-point Gauss-Legendre rule; rules are computed once and cached.
const QuadRule& gauss_legendre(int n);

struct Minimum {
  double x = 0.0;
  double fx = 0.0;
};

/// Golden-section search for a minimum of f on [lo, hi].
Minimum golden_section(const std::function<double(double)>& f, double lo, double hi, double x_tol,
                       int max_iter = 200);

}  // namespace ktt::numeric
