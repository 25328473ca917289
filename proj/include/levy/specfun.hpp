#pragma once

// Real special functions needed by the closed-form densities and the worked
// examples. Everything here is pure; no state is shared between calls.

#include <cstddef>
#include <vector>

namespace levy::sf {

/// Euler gamma. Throws DomainError at the poles 0, -1, -2, ...
double gamma(double x);

/// Parameters of a generalized hypergeometric series pFq(numer; denom; arg).
struct HyperParams {
  std::vector<double> numer;
  std::vector<double> denom;
  double arg = 0.0;
};

struct SeriesResult {
  double value = 0.0;
  std::size_t terms_used = 0;
  double est_rel_error = 0.0;
  bool converged = false;
};

struct SeriesOptions {
  std::size_t max_terms = 20000;
  /// Cancellation factor (max partial sum / |sum|) above which the series is
  /// re-summed in multiple precision.
  double cancellation_limit = 1e6;
};

/// Sums pFq by term recurrence. Never returns a silently wrong value: when the
/// tail bound or the cancellation estimate exceeds `target_rel_tol` the result
/// carries converged = false. Throws DomainError for a zero or negative-integer
/// lower parameter, or when p > q + 1.
SeriesResult hyper_pfq(const HyperParams& params, double target_rel_tol,
                       const SeriesOptions& options = {});

/// Modified Bessel function of the second kind K_nu(x), 0 <= nu < 1, x > 0.
/// Temme's series for x <= 2 and Steed's continued fraction above.
double bessel_k(double nu, double x);
/// e^x K_nu(x); finite for arguments where K_nu itself underflows.
double bessel_k_scaled(double nu, double x);

/// Airy Ai(y) for y >= 0, through Ai(y) = (1/pi) sqrt(y/3) K_{1/3}(2/3 y^{3/2}).
double airy_ai(double y);

/// Upper incomplete gamma Gamma(0, x) = E_1(x) = -Ei(-x), x > 0.
double gamma0_incomplete(double x);
/// e^x Gamma(0, x).
double gamma0_incomplete_scaled(double x);

/// arccos(w)/sqrt(1-w^2) for w < 1, arccosh(w)/sqrt(w^2-1) for w > 1, 1 at
/// w = 1. Continuous and decreasing on (0, inf).
double arc_ratio(double w);

}  // namespace levy::sf
