#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "levy/error.hpp"
#include "levy/specfun.hpp"

namespace levy::sf {
namespace {

using real = long double;
constexpr real kEps = std::numeric_limits<real>::epsilon();

// E_1(x) by its power series, x <= 1.
real e1_series(real x) {
  real sum = -std::numbers::egamma_v<real> - std::log(x);
  real fact = 1.0L;
  for (int i = 1; i < 1000; ++i) {
    fact *= -x / i;
    const real del = -fact / i;
    sum += del;
    if (std::fabs(del) < std::fabs(sum) * kEps) break;
  }
  return sum;
}

// e^x E_1(x) by the modified Lentz continued fraction, x > 1.
real e1_cf_scaled(real x) {
  constexpr real tiny = 1e-4000L;
  real b = x + 1.0L;
  real c = 1.0L / tiny;
  real d = 1.0L / b;
  real h = d;
  for (int i = 1; i < 10000; ++i) {
    const real an = -static_cast<real>(i) * i;
    b += 2.0L;
    d = 1.0L / (an * d + b);
    c = b + an / c;
    const real del = c * d;
    h *= del;
    if (std::fabs(del - 1.0L) < kEps) break;
  }
  return h;
}

void check(double x) {
  if (!(x > 0.0)) throw DomainError("gamma0_incomplete: requires x > 0, got " + std::to_string(x));
}

}  // namespace

double gamma0_incomplete(double x) {
  check(x);
  if (x <= 1.0) return static_cast<double>(e1_series(x));
  return static_cast<double>(e1_cf_scaled(x) * std::exp(-static_cast<real>(x)));
}

double gamma0_incomplete_scaled(double x) {
  check(x);
  if (x <= 1.0) return static_cast<double>(e1_series(x) * std::exp(static_cast<real>(x)));
  return static_cast<double>(e1_cf_scaled(x));
}

double arc_ratio(double w) {
  if (!(w > 0.0)) throw DomainError("arc_ratio: requires w > 0, got " + std::to_string(w));
  const double d = w - 1.0;
  if (std::fabs(d) < 1e-4) {
    // 2F1(1, 1; 3/2; (1-w)/2) = sum_n n! / (3/2)_n u^n
    const double u = -0.5 * d;
    double term = 1.0;
    double sum = 1.0;
    for (int n = 0; n < 12; ++n) {
      term *= (n + 1.0) / (n + 1.5) * u;
      sum += term;
    }
    return sum;
  }
  if (w < 1.0) return std::acos(w) / std::sqrt((1.0 - w) * (1.0 + w));
  return std::acosh(w) / std::sqrt(d * (w + 1.0));
}

}  // namespace levy::sf
