#include <boost/math/tools/minima.hpp>
#include <cmath>
#include <vector>

#include "levy/densities.hpp"
#include "levy/error.hpp"

namespace levy {

namespace {

constexpr int kSamples = 64;

struct LogSamples {
  std::vector<double> u, lg;
};

LogSamples sample_tail(const DensityHandle& g, std::pair<double, double> w) {
  if (!(w.first >= 10.0)) throw ConfigError("tail window must start at x >= 10");
  if (!(w.second >= w.first * std::sqrt(10.0)))
    throw ConfigError("tail window must span at least half a decade");
  LogSamples s;
  const double u0 = std::log(w.first), u1 = std::log(w.second);
  for (int i = 0; i < kSamples; ++i) {
    const double u = u0 + (u1 - u0) * i / (kSamples - 1);
    const double v = g(std::exp(u));
    if (!(v > 0.0)) throw DomainError("density vanishes inside the tail window");
    s.u.push_back(u);
    s.lg.push_back(std::log(v));
  }
  return s;
}

// Residual sum of squares of lg ~ A + B*phi after projecting out A and B.
double projected_rss(const std::vector<double>& phi, const std::vector<double>& y) {
  const double n = static_cast<double>(y.size());
  double mp = 0.0, my = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) mp += phi[i], my += y[i];
  mp /= n, my /= n;
  double spp = 0.0, spy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    const double dp = phi[i] - mp, dy = y[i] - my;
    spp += dp * dp, spy += dp * dy, syy += dy * dy;
  }
  return spp > 0.0 ? syy - spy * spy / spp : syy;
}

}  // namespace

double local_tail_slope(const DensityHandle& g, std::pair<double, double> window) {
  const auto s = sample_tail(g, window);
  const double n = static_cast<double>(s.u.size());
  double mu = 0.0, ml = 0.0;
  for (std::size_t i = 0; i < s.u.size(); ++i) mu += s.u[i], ml += s.lg[i];
  mu /= n, ml /= n;
  double suu = 0.0, sul = 0.0;
  for (std::size_t i = 0; i < s.u.size(); ++i) {
    suu += (s.u[i] - mu) * (s.u[i] - mu);
    sul += (s.u[i] - mu) * (s.lg[i] - ml);
  }
  return -sul / suu;
}

double tail_exponent(const DensityHandle& g, std::pair<double, double> window) {
  const auto s = sample_tail(g, window);
  // For fixed E the model ln g + E u = A + B exp(-(E-1) u) is linear in A, B.
  auto rss = [&](double e) {
    std::vector<double> y(s.u.size()), phi(s.u.size());
    for (std::size_t i = 0; i < s.u.size(); ++i) {
      y[i] = s.lg[i] + e * s.u[i];
      phi[i] = std::exp(-(e - 1.0) * (s.u[i] - s.u.front()));
    }
    return projected_rss(phi, y);
  };
  const auto best = boost::math::tools::brent_find_minima(rss, 1.01, 1.99, 50);
  return best.first;
}

QuadPlan plan_for_density(const DensityHandle& g, std::optional<double> p) {
  const double a = g.alpha();
  const OriginLaw law = origin_law(a);
  const double damp = p.value_or(0.0);
  if (damp < 0.0) throw ConfigError("damping must be non-negative");
  QuadPlan plan;
  plan.tail_decay_hint = 1.0 + a;
  plan.origin_hint = OriginHint{law.c, law.rho};
  // Coarse scan in ln x from where exp(-c x^-rho) ~ e^-40 up to x = 1e3.
  const double u0 = std::log(law.c / 40.0) / law.rho;
  const double u1 = std::log(1e3);
  const int n = g.is_closed() ? 120 : 40;
  double best_u = 0.0, best_v = -1.0;
  for (int i = 0; i <= n; ++i) {
    const double u = u0 + (u1 - u0) * i / n;
    const double x = std::exp(u);
    const double v = g(x) * std::exp(-damp * x);
    if (v > best_v) best_v = v, best_u = u;
  }
  plan.split_scale = std::exp(best_u);
  return plan;
}

QuadPlan plan_for_density(const StableIndex& alpha, std::optional<double> p) {
  if (has_closed_form(alpha)) return plan_for_density(DensityHandle::closed(alpha), p);
  // Without a density to scan, split at the mode of the small-x law.
  const OriginLaw law = origin_law(alpha.value());
  if (p && *p < 0.0) throw ConfigError("damping must be non-negative");
  QuadPlan plan;
  plan.tail_decay_hint = 1.0 + alpha.value();
  plan.origin_hint = OriginHint{law.c, law.rho};
  plan.split_scale = std::pow(law.c * law.rho / -law.b, 1.0 / law.rho);
  return plan;
}

}  // namespace levy
