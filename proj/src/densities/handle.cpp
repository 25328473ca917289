#include <cmath>
#include <numbers>

#include "levy/densities.hpp"
#include "levy/error.hpp"

namespace levy {

OriginLaw origin_law(double a) {
  return {(1.0 - a) * std::pow(a, a / (1.0 - a)), a / (1.0 - a),
          -(2.0 - a) / (2.0 * (1.0 - a))};
}

double large_x_series(double a, double x) {
  if (!(x > 0.0)) throw DomainError("series argument must be positive");
  const long double lx = std::log(static_cast<long double>(x));
  long double sum = 0.0L, prev_mag = 0.0L;
  int small = 0;
  for (int k = 1; k < 5000; ++k) {
    const long double ak = static_cast<long double>(a) * k;
    const long double s = std::sin(std::numbers::pi_v<long double> * ak);
    const long double mag =
        std::exp(std::lgamma(ak + 1.0L) - std::lgamma(k + 1.0L) - (ak + 1.0L) * lx);
    const long double term = (k % 2 ? 1.0L : -1.0L) * mag * s;
    sum += term;
    // Stop once the magnitudes are falling and three in a row are negligible.
    if (mag < prev_mag && mag <= 1e-19L * std::abs(sum)) {
      if (++small >= 3) break;
    } else {
      small = 0;
    }
    prev_mag = mag;
  }
  return static_cast<double>(sum / std::numbers::pi_v<long double>);
}

ChebLogInterpolant::ChebLogInterpolant(double u_lo, double u_hi, std::vector<double> coeffs,
                                       double tail_exponent, double origin_c,
                                       double origin_rho)
    : u_lo_(u_lo),
      u_hi_(u_hi),
      coeffs_(std::move(coeffs)),
      tail_exponent_(tail_exponent),
      origin_c_(origin_c),
      origin_rho_(origin_rho) {
  if (!(u_lo_ < u_hi_) || !std::isfinite(u_lo_) || !std::isfinite(u_hi_))
    throw ConfigError("interpolant needs finite u_lo < u_hi");
  if (coeffs_.size() < 8) throw ConfigError("interpolant needs at least 8 coefficients");
  for (double c : coeffs_)
    if (!std::isfinite(c)) throw ConfigError("interpolant coefficient is not finite");
  const double a = tail_exponent_ - 1.0;
  if (!(a > 0.0 && a < 1.0)) throw ConfigError("tail exponent must lie in (1, 2)");
  if (!(origin_rho_ > 0.0) || !std::isfinite(origin_c_))
    throw ConfigError("origin law needs rho > 0 and finite c");
  origin_b_ = origin_law(a).b;
  ln_at_lo_ = interior(u_lo_);
  const double ln_series = std::log(large_x_series(a, std::exp(u_hi_)));
  tail_anchor_ = interior(u_hi_) - ln_series;
  raw_seam_gap_ = std::abs(std::expm1(tail_anchor_));
}

double ChebLogInterpolant::interior(double u) const {
  const double t = (2.0 * u - (u_lo_ + u_hi_)) / (u_hi_ - u_lo_);
  double b1 = 0.0, b2 = 0.0;
  for (std::size_t k = coeffs_.size() - 1; k >= 1; --k) {
    const double b0 = 2.0 * t * b1 - b2 + coeffs_[k];
    b2 = b1;
    b1 = b0;
  }
  return t * b1 - b2 + coeffs_[0];
}

double ChebLogInterpolant::tail(double u) const {
  const double s = large_x_series(tail_exponent_ - 1.0, std::exp(u));
  if (!(s > 0.0)) return -INFINITY;
  return tail_anchor_ + std::log(s);
}

double ChebLogInterpolant::log_eval(double u) const {
  if (u < u_lo_)
    return ln_at_lo_ + origin_b_ * (u - u_lo_) -
           origin_c_ * (std::exp(-origin_rho_ * u) - std::exp(-origin_rho_ * u_lo_));
  if (u > u_hi_) return tail(u);
  return interior(u);
}

double ChebLogInterpolant::operator()(double x) const {
  if (!(x > 0.0)) throw DomainError("density argument must be positive");
  return std::exp(log_eval(std::log(x)));
}

namespace {

StableIndex chain_product(const std::vector<StableIndex>& chain) {
  if (chain.empty()) throw ConfigError("composition chain is empty");
  StableIndex p = chain.front();
  for (std::size_t i = 1; i < chain.size(); ++i) p = p * chain[i];
  return p;
}

}  // namespace

DensityHandle DensityHandle::closed(const StableIndex& a) {
  if (!has_closed_form(a)) throw UnsupportedIndex("no closed form for alpha = " + a.str());
  return DensityHandle(a, {a}, a);
}

DensityHandle DensityHandle::tabulated(std::vector<StableIndex> chain,
                                       std::shared_ptr<const ChebLogInterpolant> table) {
  if (!table) throw ConfigError("tabulated density needs an interpolant");
  const StableIndex idx = chain_product(chain);
  return DensityHandle(idx, std::move(chain), std::move(table));
}

DensityHandle DensityHandle::live(std::vector<StableIndex> chain,
                                  std::function<double(double)> eval) {
  if (!eval) throw ConfigError("live density needs an evaluator");
  const StableIndex idx = chain_product(chain);
  return DensityHandle(idx, std::move(chain), std::move(eval));
}

bool DensityHandle::is_tabulated() const { return std::holds_alternative<Table>(form_); }

std::shared_ptr<const ChebLogInterpolant> DensityHandle::table() const {
  if (auto p = std::get_if<Table>(&form_)) return *p;
  return nullptr;
}

double DensityHandle::operator()(double x) const {
  if (!(x > 0.0)) throw DomainError("density argument must be positive");
  if (auto a = std::get_if<StableIndex>(&form_)) return eval_closed(*a, x);
  if (auto t = std::get_if<Table>(&form_)) return (**t)(x);
  const double v = std::get<Live>(form_)(x);
  if (v < 0.0 && v >= -1e-12) return 0.0;
  return v;
}

double kernel_kappa(const DensityHandle& g, double t, double x) {
  if (!(t > 0.0) || !(x > 0.0)) throw DomainError("kappa needs t > 0 and x > 0");
  const double inv = g.index().inverse();
  double y = x * std::pow(t, -inv);
  const double ln_y = std::log(x) - inv * std::log(t);
  // Deep in the essential singularity exp(-c y^-rho) underflows.
  const OriginLaw law = origin_law(g.alpha());
  if (ln_y < (std::log(law.c) - std::log(800.0)) / law.rho) return 0.0;
  if (ln_y > 700.0) {
    // Leading tail term, kept in logs: g(y) ~ Gamma(1+a) sin(pi a)/pi y^-(1+a).
    const double a = g.alpha();
    return std::exp(std::lgamma(1.0 + a) + std::log(std::sin(std::numbers::pi * a) / std::numbers::pi) -
                    a * ln_y - std::log(x));
  }
  if (!(y > 0.0) || !std::isfinite(y)) y = std::exp(ln_y);
  return y * g(y) / x;
}

}  // namespace levy
