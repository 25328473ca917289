#include <cmath>
#include <numbers>
#include <sstream>
#include <vector>

#include "levy/error.hpp"
#include "levy/transform.hpp"

namespace levy {

namespace {

double log_density_at(const DensityHandle& d, double u) {
  const double x = std::exp(u);
  double v;
  try {
    v = d(x);
  } catch (const std::exception& e) {
    std::ostringstream os;
    os << "tabulation failed at x = " << x << ": " << e.what();
    throw TabulationError(os.str());
  }
  if (!(v > 0.0) || !std::isfinite(v)) {
    std::ostringstream os;
    os << "tabulation failed at x = " << x << ": density value " << v;
    throw TabulationError(os.str());
  }
  return std::log(v);
}

}  // namespace

ChebLogInterpolant tabulate(const DensityHandle& d, const TabulateOptions& opt) {
  if (opt.nodes < 32) throw ConfigError("tabulation needs at least 32 nodes");
  const double a = d.alpha();
  const OriginLaw law = origin_law(a);
  double u_lo, u_hi;
  if (opt.u_range) {
    std::tie(u_lo, u_hi) = *opt.u_range;
    if (!(u_lo < u_hi)) throw ConfigError("tabulation range needs u_lo < u_hi");
  } else {
    u_lo = std::min(std::log(1e-3), std::log(law.c / 60.0) / law.rho);
    u_hi = std::log(1e4);
  }

  // Chebyshev-Lobatto nodes t_j = cos(pi j / n), j = 0..n.
  const int n = opt.nodes - 1;
  const double mid = 0.5 * (u_lo + u_hi), half = 0.5 * (u_hi - u_lo);
  std::vector<double> f(n + 1);
  for (int j = 0; j <= n; ++j)
    f[j] = log_density_at(d, mid + half * std::cos(std::numbers::pi * j / n));
  std::vector<double> c(n + 1);
  for (int k = 0; k <= n; ++k) {
    long double s = 0.0L;
    for (int j = 0; j <= n; ++j) {
      const double w = (j == 0 || j == n) ? 0.5 : 1.0;
      s += w * f[j] * std::cos(std::numbers::pi * static_cast<double>(j) * k / n);
    }
    c[k] = static_cast<double>(2.0L * s / n);
  }
  c[0] *= 0.5;
  c[n] *= 0.5;

  // Left extrapolation: ln g = ln g(u_lo) + b (u - u_lo) - c' (e^-rho u - e^-rho u_lo),
  // with c' matching the interior slope at the seam (T_k'(-1) = (-1)^(k+1) k^2).
  double dt = 0.0;
  for (int k = 1; k <= n; ++k) dt += ((k % 2) ? 1.0 : -1.0) * k * k * c[k];
  const double slope = dt / half;
  const double origin_c = (slope - law.b) / (law.rho * std::exp(-law.rho * u_lo));

  ChebLogInterpolant table(u_lo, u_hi, c, 1.0 + a, origin_c, law.rho);
  if (table.raw_seam_gap() > 1e-6) {
    std::ostringstream os;
    os << "tail series misses the interpolant by " << table.raw_seam_gap()
       << " at x = " << std::exp(u_hi);
    throw TabulationError(os.str());
  }
  if (u_hi >= std::log(1e4) - 1e-9 && u_lo <= std::log(1e3)) {
    // The stored exponent is exact; the fitted one over the last decade has to
    // agree with it.
    auto view = DensityHandle::live(d.chain(), [&table](double x) { return table(x); });
    const double fitted = tail_exponent(view, {1e3, 1e4});
    if (std::abs(fitted - (1.0 + a)) > 0.02) {
      std::ostringstream os;
      os << "fitted tail exponent " << fitted << " disagrees with " << 1.0 + a;
      throw TabulationError(os.str());
    }
  }
  for (int i = 0; i < opt.checkpoints; ++i) {
    const int j = opt.checkpoints > 1 ? i * (n - 1) / (opt.checkpoints - 1) : n / 2;
    const double u = mid + half * std::cos(std::numbers::pi * (j + 0.5) / n);
    const double err = std::abs(std::expm1(table.interior(u) - log_density_at(d, u)));
    if (!(err <= opt.checkpoint_tol)) {
      std::ostringstream os;
      os << "interpolation error " << err << " at x = " << std::exp(u)
         << " exceeds " << opt.checkpoint_tol << "; increase the node count";
      throw TabulationError(os.str());
    }
  }
  return table;
}

DensityHandle tabulated(const DensityHandle& d, const TabulateOptions& options) {
  if (d.is_tabulated()) return d;
  auto table = std::make_shared<const ChebLogInterpolant>(tabulate(d, options));
  return DensityHandle::tabulated(d.chain(), std::move(table));
}

}  // namespace levy
