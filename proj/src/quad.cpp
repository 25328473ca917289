#include "levy/quad.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <vector>

#include "levy/error.hpp"

namespace levy {

namespace {

constexpr double kHalfPi = std::numbers::pi / 2.0;
constexpr double kH0 = 0.125;
// Sampling stops at |ln(x/a)| = 345, i.e. about 1e-150 .. 1e150 around a.
constexpr double kMaxLog = 345.0;
constexpr int kMargin = 3;

struct Sampler {
  const Integrand& f;
  double a;
  std::size_t evaluations = 0;

  double x_at(double s) const { return a * std::exp(kHalfPi * std::sinh(s)); }

  double value(double x) {
    const double v = f(x);
    ++evaluations;
    if (!std::isfinite(v)) {
      std::ostringstream os;
      os << "integrand is not finite at x = " << x;
      throw QuadError(os.str(), x);
    }
    return v;
  }

  // Weighted integrand f(x) dx/ds at s.
  double operator()(double s) {
    const double x = x_at(s);
    if (x == 0.0 || !std::isfinite(x)) return 0.0;
    const double v = value(x);
    if (v == 0.0) return 0.0;
    return v * x * kHalfPi * std::cosh(s);
  }
};

struct Range {
  double s_lo, s_hi;  // active interval in s
  double sum;         // trapezoid sum at the current level
};

// Adds the odd nodes of `level` inside [s_lo, s_hi]; returns the new sum.
double refine(Sampler& g, const Range& r, int level) {
  const double h = kH0 / std::ldexp(1.0, level);
  const long first = static_cast<long>(std::ceil(r.s_lo / h));
  const long last = static_cast<long>(std::floor(r.s_hi / h));
  long double acc = 0.0L;
  for (long j = first; j <= last; ++j) {
    if ((j & 1L) == 0) continue;
    acc += g(j * h);
  }
  return 0.5 * r.sum + h * static_cast<double>(acc);
}

}  // namespace

void QuadPlan::validate() const {
  if (!(abs_tol > 0.0) || !(rel_tol > 0.0))
    throw ConfigError("quadrature tolerances must be positive");
  if (max_depth < 1) throw ConfigError("quadrature max_depth must be >= 1");
  if (!(split_scale > 0.0) || !std::isfinite(split_scale))
    throw ConfigError("quadrature split_scale must be positive and finite");
  if (origin_hint && (!(origin_hint->c > 0.0) || !(origin_hint->rho > 0.0)))
    throw ConfigError("origin hint needs c > 0 and rho > 0");
}

QuadResult integrate(const Integrand& f, const QuadPlan& plan) {
  plan.validate();
  const double a = plan.split_scale;
  const double ln_a = std::log(a);

  double u_lo = std::max(-kMaxLog, -690.0 - ln_a);
  const double u_hi = std::min(kMaxLog, 690.0 - ln_a);
  if (plan.origin_hint) {
    // Below this point exp(-c x^-rho) underflows.
    const double x_min =
        std::pow(plan.origin_hint->c / 745.0, 1.0 / plan.origin_hint->rho);
    u_lo = std::max(u_lo, std::log(x_min) - ln_a);
  }
  if (u_lo >= 0.0) {
    // The whole support lies right of the split point; move it.
    QuadPlan moved = plan;
    moved.split_scale = 2.0 * std::exp(u_lo + ln_a);
    return integrate(f, moved);
  }
  const double s_min = std::asinh(u_lo / kHalfPi);
  const double s_max = std::asinh(u_hi / kHalfPi);

  Sampler g{f, a};
  const long j_min = static_cast<long>(std::ceil(s_min / kH0));
  const long j_max = static_cast<long>(std::floor(s_max / kH0));
  std::vector<double> w(static_cast<std::size_t>(j_max - j_min + 1));
  long double total0 = 0.0L;
  for (long j = j_min; j <= j_max; ++j) {
    w[j - j_min] = g(j * kH0);
    total0 += w[j - j_min];
  }
  const double i0 = kH0 * static_cast<double>(total0);
  const double tol0 = std::max(plan.abs_tol, plan.rel_tol * std::abs(i0));
  const double delta = 1e-4 * tol0 / kH0;

  long sig_lo = 0, sig_hi = -1;
  for (long j = j_min; j <= j_max; ++j) {
    if (std::abs(w[j - j_min]) >= delta) {
      if (sig_hi < sig_lo) sig_lo = j;
      sig_hi = j;
    }
  }
  QuadResult out;
  if (sig_hi < sig_lo) {
    // Nothing above the noise floor anywhere.
    out.value = i0;
    out.est_error = std::abs(i0) + plan.abs_tol;
    out.evaluations = g.evaluations;
    out.converged = true;
    return out;
  }

  bool edge_ok = true;
  // Mass at the left edge means a non-integrable origin singularity.
  if (sig_lo == j_min && !plan.origin_hint) edge_ok = false;
  if (sig_hi == j_max) {
    edge_ok = false;
    if (plan.tail_decay_hint > 1.0) {
      // The x^-E tail model beyond the last node may still certify the range,
      // provided the local decay rate is at least the hinted one.
      const double e = plan.tail_decay_hint;
      const double x_end = g.x_at(j_max * kH0);
      const double x_prev = g.x_at((j_max - 1) * kH0);
      const double f_end = g.value(x_end), f_prev = g.value(x_prev);
      const double bound = std::abs(f_end) * x_end / (e - 1.0);
      const double e_loc = -std::log(std::abs(f_end / f_prev)) / std::log(x_end / x_prev);
      edge_ok = bound < 0.1 * plan.abs_tol && e_loc >= e - 1e-3;
    }
  }

  const long a_lo = std::max(j_min, sig_lo - kMargin);
  const long a_hi = std::min(j_max, sig_hi + kMargin);
  // Each dropped node is below delta; their total bounds the trimming error.
  double dropped = 0.0;
  for (long j = j_min; j <= j_max; ++j)
    if (j < a_lo || j > a_hi) dropped += std::abs(w[j - j_min]);
  dropped *= kH0;

  Range r{a_lo * kH0, a_hi * kH0, 0.0};
  long double sum0 = 0.0L;
  double l1 = 0.0;
  for (long j = a_lo; j <= a_hi; ++j) {
    sum0 += w[j - j_min];
    l1 += std::abs(w[j - j_min]);
  }
  const double noise = 8.0 * std::numeric_limits<double>::epsilon() * kH0 * l1;
  r.sum = kH0 * static_cast<double>(sum0);
  double est = std::abs(i0);
  bool done = false;
  for (int level = 1; level <= plan.max_depth && !done; ++level) {
    const double next = refine(g, r, level);
    // Level difference with a safety factor, floored at the rounding noise of
    // the sum.
    est = std::max(4.0 * std::abs(next - r.sum), noise);
    r.sum = next;
    const double tol = std::max(plan.abs_tol, plan.rel_tol * std::abs(next));
    done = level >= 2 && est <= tol;
  }

  out.value = r.sum;
  out.est_error = est + dropped;
  out.evaluations = g.evaluations;
  out.converged =
      edge_ok && done &&
      out.est_error <= std::max(plan.abs_tol, plan.rel_tol * std::abs(out.value));
  if (!edge_ok) out.est_error = std::max(out.est_error, std::abs(out.value));
  return out;
}

}  // namespace levy
