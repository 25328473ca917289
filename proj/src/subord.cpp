#include "levy/subord.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "levy/error.hpp"
#include "levy/transform.hpp"

namespace levy {

namespace {

DensityHandle closed_density(const StableIndex& a) {
  if (!has_closed_form(a))
    throw UnsupportedIndex("subordination needs a closed-form density; alpha = " + a.str());
  return DensityHandle::closed(a);
}

double heat_kernel(double x, double s) {
  return std::exp(-x * x / (4.0 * s)) / std::sqrt(4.0 * std::numbers::pi * s);
}

QuadPlan point_plan(const SubordinationRequest& req, double x) {
  if (req.plan) return *req.plan;
  QuadPlan plan = subord_plan(req.alpha, req.tau);
  if (x != 0.0) plan.origin_hint = OriginHint{0.25 * x * x, 1.0};
  return plan;
}

double certified(const QuadResult& r, const char* what, double at) {
  if (!r.converged) {
    std::ostringstream os;
    os << what << " not certified at " << at << " (error estimate " << r.est_error << ")";
    throw QuadError(os.str(), at);
  }
  return r.value;
}

}  // namespace

double kernel_n(const DensityHandle& g, double s, double tau) {
  if (!(s > 0.0) || !(tau > 0.0)) throw DomainError("kernel_n needs s > 0 and tau > 0");
  // kappa_a(s, tau) = (y/tau) g(y) with y = tau s^-1/a.
  return tau * kernel_kappa(g, s, tau) / (g.alpha() * s);
}

double kernel_n(const StableIndex& alpha, double s, double tau) {
  return kernel_n(closed_density(alpha), s, tau);
}

QuadPlan subord_plan(const StableIndex& alpha, double tau) {
  if (!(tau > 0.0)) throw DomainError("tau must be positive");
  const OriginLaw law = origin_law(alpha.value());
  const double mode = std::pow(law.c * law.rho / -law.b, 1.0 / law.rho);
  QuadPlan plan;
  plan.abs_tol = 1e-15;
  plan.rel_tol = 1e-12;
  plan.split_scale = std::pow(tau / mode, alpha.value());
  return plan;
}

QuadResult inverse_levy(const DensityHandle& g, const std::function<double(double)>& P,
                        double tau, std::optional<QuadPlan> plan) {
  if (!P) throw ConfigError("inverse Levy transform needs a probe function");
  return integrate(
      [&](double s) {
        const double n = kernel_n(g, s, tau);
        return n == 0.0 ? 0.0 : n * P(s);
      },
      plan.value_or(subord_plan(g.index(), tau)));
}

QuadResult inverse_levy_via_levy2(const DensityHandle& g, const std::function<double(double)>& P,
                                  double tau) {
  if (!P) throw ConfigError("inverse Levy transform needs a probe function");
  const double a = g.alpha();
  const Levy2Result r =
      levy2_apply({g, [&](double s) { return P(s) / (a * s); }, std::nullopt}, tau);
  QuadResult out;
  out.value = tau * r.value;
  out.est_error = tau * r.est_error;
  out.converged = r.converged;
  return out;
}

std::vector<SubordPoint> subordinate_free_diffusion(const SubordinationRequest& req) {
  if (!(req.tau > 0.0)) throw DomainError("tau must be positive");
  if (req.x_grid.empty()) throw ConfigError("subordination needs at least one x");
  const DensityHandle g = closed_density(req.alpha);
  std::vector<SubordPoint> out;
  out.reserve(req.x_grid.size());
  for (double x : req.x_grid) {
    if (!std::isfinite(x)) throw DomainError("x must be finite");
    const double ax = std::abs(x);
    SubordPoint pt{x, std::numeric_limits<double>::quiet_NaN(), 0.0, false};
    try {
      const QuadResult r = inverse_levy(
          g, [ax](double s) { return heat_kernel(ax, s); }, req.tau, point_plan(req, ax));
      pt.p_alpha = r.value;
      pt.est_error = r.est_error;
      pt.converged = r.converged;
    } catch (const QuadError&) {
    }
    out.push_back(pt);
  }
  return out;
}

XMoments x_moments(const StableIndex& alpha, double tau) {
  if (!(tau > 0.0)) throw DomainError("tau must be positive");
  const DensityHandle g = closed_density(alpha);
  SubordinationRequest req{alpha, tau, {}, std::nullopt};
  auto P = [&](double x) {
    return certified(
        inverse_levy(g, [x](double s) { return heat_kernel(x, s); }, tau, point_plan(req, x)),
        "propagator", x);
  };
  const double x_min_extent = 12.0 * std::pow(tau, 0.5 * alpha.value());
  XMoments m;
  // Half-line trapezoid, doubled; P is even.
  double x = 0.0, p = P(0.0);
  m.points = 1;
  for (;;) {
    const double h = x < 0.5 - 1e-12 ? 0.001 : 0.002;
    const double xn = x + h, pn = P(xn);
    m.norm += h * (p + pn);
    m.second += h * (x * x * p + xn * xn * pn);
    x = xn;
    p = pn;
    ++m.points;
    if (x >= x_min_extent && x * x * x * p < 1e-11) break;
    if (m.points > 2000000) throw QuadError("propagator tail does not decay", x);
  }
  m.x_max = x;
  return m;
}

double msd(const StableIndex& alpha, double tau) {
  const DensityHandle g = closed_density(alpha);
  return 2.0 * certified(inverse_levy(g, [](double s) { return s; }, tau), "mean s", tau);
}

double msd_exponent(const StableIndex& alpha, const std::vector<double>& tau_grid) {
  if (tau_grid.size() < 2) throw ConfigError("msd_exponent needs at least two tau values");
  const auto [lo, hi] = std::minmax_element(tau_grid.begin(), tau_grid.end());
  if (!(*lo > 0.0)) throw DomainError("tau values must be positive");
  if (*hi < 10.0 * *lo) throw ConfigError("tau grid must span at least one decade");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(tau_grid.size());
  for (double t : tau_grid) {
    const double u = std::log(t), v = std::log(msd(alpha, t));
    sx += u;
    sy += v;
    sxx += u * u;
    sxy += u * v;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

VerifyReport verify_kernel_norm(const StableIndex& alpha, const std::vector<double>& tau_grid,
                                double tol) {
  const DensityHandle g = closed_density(alpha);
  return run_checks("kernel-norm[alpha=" + alpha.str() + "]", tau_grid, tol, Metric::Abs,
                    [&](double tau) {
                      return CheckValue{
                          certified(inverse_levy(g, [](double) { return 1.0; }, tau), "norm", tau),
                          1.0};
                    });
}

VerifyReport verify_x_norm(const StableIndex& alpha, const std::vector<double>& tau_grid,
                           double tol) {
  return run_checks("x-norm[alpha=" + alpha.str() + "]", tau_grid, tol, Metric::Abs,
                    [&](double tau) { return CheckValue{x_moments(alpha, tau).norm, 1.0}; });
}

}  // namespace levy
