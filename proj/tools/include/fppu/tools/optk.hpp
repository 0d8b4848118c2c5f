#pragma once

namespace fppu::tools {

/// Relative error x * f(x) - 1 of the reciprocal seed
/// f(x) = 4 (k2 - x (k1 - x)) (k1 - x).
double seed_relative_error(double x, double k1, double k2);

/// Integral of the squared relative error over [1/2, 1], by adaptive
/// quadrature to 1e-12 absolute.
double seed_error_integral(double k1, double k2);

struct OptkResult {
  double k1 = 0.0;
  double k2 = 0.0;
  double e2 = 0.0;
  int iterations = 0;
  bool converged = false;
};

struct OptkOptions {
  double start_k1 = 1.5;
  double start_k2 = 1.0;
  double step = 0.01;          ///< initial simplex size
  double size_tolerance = 1e-10;
  int max_iterations = 20000;
};

/// Derivative-free (Nelder-Mead simplex) minimization of
/// seed_error_integral over (k1, k2).
OptkResult optimize_k(const OptkOptions& options = {});

}  // namespace fppu::tools
