#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "../specfun/hyper_mp.hpp"
#include "levy/densities.hpp"
#include "levy/error.hpp"
#include "levy/specfun.hpp"

namespace levy {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kSqrtPi = 1.7724538509055160273;
constexpr double kSqrt3 = std::numbers::sqrt3;
constexpr double kSeriesTol = 1e-15;

void require_positive(double x) {
  if (!(x > 0.0)) throw DomainError("density argument must be positive");
}

long double pfq(std::vector<double> denom, double z) {
  auto r = sf::hyper_pfq({{}, std::move(denom), z}, kSeriesTol);
  if (!r.converged) throw std::runtime_error("hypergeometric series did not converge");
  return r.value;
}

double clamp_negative(long double v) {
  if (v >= 0.0L) return static_cast<double>(v);
  if (v >= -1e-12L) return 0.0;
  throw std::runtime_error("density evaluated to a negative value");
}

// Integral over (0, inf) of w(t) exp(-(phi(t) - phi(t_star))), where phi has
// its minimum at t_star. The exponential is factored out by the caller.
double centred_integral(const Integrand& f, double t_star) {
  QuadPlan plan;
  plan.abs_tol = 1e-300;
  plan.rel_tol = 1e-13;
  plan.split_scale = t_star;
  auto r = integrate(f, plan);
  if (!r.converged) throw QuadError("density integral did not converge", t_star);
  return r.value;
}

}  // namespace

namespace forms {

double half(double x) {
  require_positive(x);
  return std::exp(-0.25 / x - 1.5 * std::log(x)) / (2.0 * kSqrtPi);
}

double third_bessel(double x) {
  require_positive(x);
  const double z = 2.0 / (3.0 * std::sqrt(3.0 * x));
  return std::exp(-z - 1.5 * std::log(x)) * sf::bessel_k_scaled(1.0 / 3.0, z) /
         (3.0 * kPi);
}

double third_airy(double x) {
  require_positive(x);
  return sf::airy_ai(std::cbrt(1.0 / (3.0 * x))) / std::cbrt(3.0 * x * x * x * x);
}

double log_two_thirds_bessel(double x) {
  require_positive(x);
  const double y = 2.0 / (27.0 * x * x);
  if (!(y < 1e300)) return -INFINITY;
  const double ks = sf::bessel_k_scaled(1.0 / 3.0, y) + sf::bessel_k_scaled(2.0 / 3.0, y);
  return std::log(2.0 * kSqrt3 / (27.0 * kPi)) - 3.0 * std::log(x) - 2.0 * y +
         std::log(ks);
}

double two_thirds_bessel(double x) { return std::exp(log_two_thirds_bessel(x)); }

double two_thirds_kummer(double x) {
  require_positive(x);
  const double z = -4.0 / (27.0 * x * x);
  const double g23 = sf::gamma(2.0 / 3.0);
  // 1F1(5/6; 2/3; z) changes sign near z = -6.6, so its relative error bound
  // is meaningless there; the budget is applied to the combined value.
  auto f1 = sf::hyper_pfq({{5.0 / 6.0}, {2.0 / 3.0}, z}, kSeriesTol);
  auto f2 = sf::hyper_pfq({{7.0 / 6.0}, {4.0 / 3.0}, z}, kSeriesTol);
  const long double lx = std::log(static_cast<long double>(x));
  const long double t1 = g23 / (kSqrt3 * kPi) * std::exp(-5.0L / 3.0L * lx) * f1.value;
  const long double t2 = (2.0L / 9.0L) / g23 * std::exp(-7.0L / 3.0L * lx) * f2.value;
  const long double err = std::abs(t1) * f1.est_rel_error + std::abs(t2) * f2.est_rel_error;
  if (!(err <= 1e-12L * std::abs(t1 + t2)))
    throw std::runtime_error("Kummer form lost precision; use the Bessel form here");
  return clamp_negative(t1 + t2);
}

double log_two_thirds_kummer_mp(double x) {
  require_positive(x);
  using sf::detail::MpReal;
  const double zabs = 4.0 / (27.0 * x * x);
  // Each 1F1 cancels like e^|z| internally and the two terms cancel like
  // e^-|z| against each other.
  long bits = 128 + static_cast<long>(2.0 * zabs / std::numbers::ln2);
  const std::size_t max_terms = 20000 + static_cast<std::size_t>(20.0 * zabs);
  auto eval = [&](long prec) {
    const MpReal xm(x, prec);
    const MpReal z = -(MpReal(4, 27, prec) / (xm * xm));
    auto s1 = sf::detail::hyper_pfq_mp({MpReal(5, 6, prec)}, {MpReal(2, 3, prec)}, z, max_terms);
    auto s2 = sf::detail::hyper_pfq_mp({MpReal(7, 6, prec)}, {MpReal(4, 3, prec)}, z, max_terms);
    if (!s1.converged || !s2.converged)
      throw std::runtime_error("multiple-precision 1F1 did not converge");
    const MpReal g23 = gamma(MpReal(2, 3, prec));
    const MpReal t1 = g23 / (sqrt(MpReal(3, 1, prec)) * MpReal::pi(prec)) *
                      pow(xm, MpReal(-5, 3, prec)) * s1.value;
    const MpReal t2 = MpReal(2, 9, prec) / g23 * pow(xm, MpReal(-7, 3, prec)) * s2.value;
    const MpReal total = t1 + t2;
    if (total.sign() <= 0) throw std::runtime_error("Kummer form lost all significance");
    return total.log_abs();
  };
  double prev = eval(bits);
  for (int attempt = 0; attempt < 6; ++attempt) {
    bits += bits / 2 + 64;
    const double next = eval(bits);
    if (std::abs(next - prev) <= 1e-15 * std::max(1.0, std::abs(next))) return next;
    prev = next;
  }
  throw std::runtime_error("Kummer form did not stabilise with precision");
}

double quarter_series(double x) {
  require_positive(x);
  const double z = -1.0 / (256.0 * x);
  const long double g34 = sf::gamma(0.75);
  const long double lx = std::log(static_cast<long double>(x));
  const long double t1 = g34 / (std::pow(2.0L, 3.5L) * kPi) * std::exp(-1.75L * lx) *
                         pfq({1.25, 1.5}, z);
  const long double t2 = -1.0L / (4.0L * kSqrtPi) * std::exp(-1.5L * lx) * pfq({0.75, 1.25}, z);
  const long double t3 = 1.0L / (4.0L * g34) * std::exp(-1.25L * lx) * pfq({0.5, 0.75}, z);
  return clamp_negative(t1 + t2 + t3);
}

double quarter_integral(double x) {
  require_positive(x);
  const double t_star = std::cbrt(0.5 * x);
  const double m = t_star * t_star / (4.0 * x) + 0.25 / t_star;
  if (m > 800.0) return 0.0;
  auto f = [x, m](double t) {
    return std::exp(-(t * t / (4.0 * x) + 0.25 / t - m)) / std::sqrt(t);
  };
  const double i = centred_integral(f, t_star);
  return i * std::exp(-m - 1.5 * std::log(x)) / (4.0 * kPi);
}

double sixth_series(double x) {
  require_positive(x);
  const double z = -1.0 / (46656.0 * x);
  const long double g23 = sf::gamma(2.0 / 3.0);
  const long double lx = std::log(static_cast<long double>(x));
  const long double sp = kSqrtPi;
  const long double c1 = std::pow(2.0L, -1.0L / 3.0L) * std::pow(3.0L, -1.5L) * sp / (g23 * g23);
  const long double c2 = -1.0L / (6.0L * g23);
  const long double c3 = 1.0L / (12.0L * sp);
  const long double c4 = -kSqrt3 * g23 / (72.0L * kPi);
  const long double c5 = std::pow(3.0L, -1.5L) * g23 * g23 /
                         (std::pow(2.0L, 17.0L / 3.0L) * sp * sp * sp);
  const long double s =
      c1 * std::exp(-7.0L / 6.0L * lx) * pfq({1.0 / 3, 0.5, 2.0 / 3, 5.0 / 6}, z) +
      c2 * std::exp(-4.0L / 3.0L * lx) * pfq({0.5, 2.0 / 3, 5.0 / 6, 7.0 / 6}, z) +
      c3 * std::exp(-1.5L * lx) * pfq({2.0 / 3, 5.0 / 6, 7.0 / 6, 4.0 / 3}, z) +
      c4 * std::exp(-5.0L / 3.0L * lx) * pfq({5.0 / 6, 7.0 / 6, 4.0 / 3, 1.5}, z) +
      c5 * std::exp(-11.0L / 6.0L * lx) * pfq({7.0 / 6, 4.0 / 3, 1.5, 5.0 / 3}, z);
  return clamp_negative(s);
}

double sixth_integral(double x) {
  require_positive(x);
  const double b = 2.0 / (3.0 * kSqrt3);
  const double y_star = std::pow(b * x, 0.8);
  const double m = y_star / (4.0 * x) + b * std::pow(y_star, -0.25);
  if (m > 800.0) return 0.0;
  auto f = [x, b, m](double y) {
    const double arg = b * std::pow(y, -0.25);
    return std::exp(-(y / (4.0 * x) + arg - m)) * std::pow(y, -0.75) *
           sf::bessel_k_scaled(1.0 / 3.0, arg);
  };
  const double i = centred_integral(f, y_star);
  return i * std::exp(-m - 1.5 * std::log(kPi * x)) / 12.0;
}

}  // namespace forms

bool has_closed_form(const StableIndex& a) {
  const long l = a.num(), k = a.den();
  return l == 1 ? (k == 2 || k == 3 || k == 4 || k == 6) : (l == 2 && k == 3);
}

double eval_closed(const StableIndex& a, double x) {
  if (!has_closed_form(a))
    throw UnsupportedIndex("no closed form for alpha = " + a.str());
  require_positive(x);
  if (a.num() == 2) return x >= 0.2 ? forms::two_thirds_kummer(x) : forms::two_thirds_bessel(x);
  switch (a.den()) {
    case 2: return forms::half(x);
    case 3: return forms::third_bessel(x);
    case 4: return x >= 0.01 ? forms::quarter_series(x) : forms::quarter_integral(x);
    default: return x >= 0.02 ? forms::sixth_series(x) : forms::sixth_integral(x);
  }
}

}  // namespace levy
