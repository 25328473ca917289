#pragma once

// Adaptive quadrature on (0, inf) for integrands that vanish like
// exp(-c x^{-rho}) at the origin and decay algebraically at infinity.
//
// The half-line is mapped by x = a exp((pi/2) sinh s), a = split_scale, so that
// s < 0 covers (0, a] and s > 0 covers [a, inf). Both ends decay doubly
// exponentially in s for any integrable algebraic tail. The range is trimmed to
// where the integrand matters, then summed by the trapezoid rule with step
// halving.

#include <cstddef>
#include <functional>
#include <optional>

namespace levy {

/// Stretched-exponential suppression exp(-c x^{-rho}) at the origin.
struct OriginHint {
  double c = 0.0;
  double rho = 0.0;
};

struct QuadPlan {
  double abs_tol = 1e-12;
  double rel_tol = 1e-10;
  int max_depth = 12;
  /// Breakpoint between the origin-dominated and tail-dominated parts.
  double split_scale = 1.0;
  /// Expected decay exponent of the integrand at infinity; 0 when unknown.
  /// Only used to certify that the sampled range captures the tail.
  double tail_decay_hint = 0.0;
  std::optional<OriginHint> origin_hint;

  /// Throws ConfigError on a non-positive tolerance, depth or scale.
  void validate() const;
};

struct QuadResult {
  double value = 0.0;
  double est_error = 0.0;
  std::size_t evaluations = 0;
  bool converged = false;
};

using Integrand = std::function<double(double)>;

/// Integrates f over (0, inf). Throws QuadError if f returns NaN or infinity
/// (the exception carries the offending abscissa). Non-convergence, including
/// mass that does not die off before x = 1e+-150, is reported through
/// converged = false together with the best estimate.
QuadResult integrate(const Integrand& f, const QuadPlan& plan);

}  // namespace levy
