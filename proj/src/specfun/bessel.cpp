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
constexpr real kPi = std::numbers::pi_v<real>;
constexpr int kMaxIter = 10000;

// Taylor coefficients of 1/Gamma(1+z) about 0 (odd powers only are needed for
// Gamma_1, which is a divided difference and cancels badly near mu = 0).
constexpr real kRecipGammaOdd[] = {
    0.57721566490153286061L,  -0.042002635034095235529L, -0.042197734555544336748L,
    0.0072189432466630995424L, -0.00021524167411495097282L, -0.000020134854780788238656L,
    1.1330272319816958824e-6L, 6.1160951044814158179e-9L};

struct TemmeGammas {
  real gam1;   // (1/Gamma(1-mu) - 1/Gamma(1+mu)) / (2 mu)
  real gam2;   // (1/Gamma(1-mu) + 1/Gamma(1+mu)) / 2
  real gampl;  // 1/Gamma(1+mu)
  real gammi;  // 1/Gamma(1-mu)
};

TemmeGammas temme_gammas(real mu) {
  TemmeGammas g;
  g.gampl = 1.0L / gamma(static_cast<double>(1.0L + mu));
  g.gammi = 1.0L / gamma(static_cast<double>(1.0L - mu));
  g.gam2 = 0.5L * (g.gammi + g.gampl);
  if (std::fabs(mu) < 0.25L) {
    const real m2 = mu * mu;
    real acc = 0.0L;
    for (int i = std::size(kRecipGammaOdd) - 1; i >= 0; --i) acc = acc * m2 + kRecipGammaOdd[i];
    g.gam1 = -acc;
  } else {
    g.gam1 = (g.gammi - g.gampl) / (2.0L * mu);
  }
  return g;
}

struct KPair {
  real k_mu;
  real k_mu1;
};

// Temme's series for |mu| <= 1/2, 0 < x <= 2. Returns unscaled values.
KPair temme_series(real mu, real x) {
  const real x2 = 0.5L * x;
  const real pimu = kPi * mu;
  const real fact = std::fabs(pimu) < kEps ? 1.0L : pimu / std::sin(pimu);
  real d = -std::log(x2);
  real e = mu * d;
  const real fact2 = std::fabs(e) < kEps ? 1.0L : std::sinh(e) / e;
  const TemmeGammas g = temme_gammas(mu);
  real ff = fact * (g.gam1 * std::cosh(e) + g.gam2 * fact2 * d);
  real sum = ff;
  e = std::exp(e);
  real p = 0.5L * e / g.gampl;
  real q = 0.5L / (e * g.gammi);
  real c = 1.0L;
  d = x2 * x2;
  real sum1 = p;
  const real mu2 = mu * mu;
  for (int i = 1; i <= kMaxIter; ++i) {
    ff = (i * ff + p + q) / (i * static_cast<real>(i) - mu2);
    c *= d / i;
    p /= (i - mu);
    q /= (i + mu);
    const real del = c * ff;
    sum += del;
    sum1 += c * (p - i * ff);
    if (std::fabs(del) < std::fabs(sum) * kEps) break;
  }
  return {sum, sum1 * 2.0L / x};
}

// Steed's continued fraction CF2 for x > 2. Returns e^x-scaled values.
KPair steed_cf2_scaled(real mu, real x) {
  real b = 2.0L * (1.0L + x);
  real d = 1.0L / b;
  real h = d;
  real delh = d;
  real q1 = 0.0L;
  real q2 = 1.0L;
  const real a1 = 0.25L - mu * mu;
  real q = a1;
  real c = a1;
  real a = -a1;
  real s = 1.0L + q * delh;
  for (int i = 2; i <= kMaxIter; ++i) {
    a -= 2 * (i - 1);
    c = -a * c / i;
    const real qnew = (q1 - b * q2) / a;
    q1 = q2;
    q2 = qnew;
    q += c * qnew;
    b += 2.0L;
    d = 1.0L / (b + a * d);
    delh = (b * d - 1.0L) * delh;
    h += delh;
    const real dels = q * delh;
    s += dels;
    if (std::fabs(dels / s) < kEps) break;
  }
  h = a1 * h;
  const real k_mu = std::sqrt(kPi / (2.0L * x)) / s;
  return {k_mu, k_mu * (mu + x + 0.5L - h) / x};
}

real bessel_k_impl(double nu, double x, bool scaled) {
  if (!(x > 0.0)) throw DomainError("bessel_k: requires x > 0, got " + std::to_string(x));
  const real anu = std::fabs(static_cast<real>(nu));
  if (!(anu < 1.0L)) throw DomainError("bessel_k: requires |nu| < 1, got " + std::to_string(nu));
  const int shift = anu < 0.5L ? 0 : 1;
  const real mu = anu - shift;
  const real lx = x;
  if (lx <= 2.0L) {
    const KPair k = temme_series(mu, lx);
    const real v = shift == 0 ? k.k_mu : k.k_mu1;
    return scaled ? v * std::exp(lx) : v;
  }
  const KPair k = steed_cf2_scaled(mu, lx);
  const real v = shift == 0 ? k.k_mu : k.k_mu1;
  return scaled ? v : v * std::exp(-lx);
}

}  // namespace

double bessel_k(double nu, double x) { return static_cast<double>(bessel_k_impl(nu, x, false)); }

double bessel_k_scaled(double nu, double x) {
  return static_cast<double>(bessel_k_impl(nu, x, true));
}

double airy_ai(double y) {
  if (std::isnan(y)) return y;
  if (y < 0.0) throw DomainError("airy_ai: negative argument " + std::to_string(y));
  // Ai(0) = 3^{-2/3}/Gamma(2/3), Ai'(0) = -3^{-1/3}/Gamma(1/3).
  constexpr double kAi0 = 0.35502805388781723926;
  constexpr double kAiPrime0 = -0.25881940379280679840;
  if (y < 1e-8) return kAi0 + kAiPrime0 * y;
  const double zeta = 2.0 / 3.0 * y * std::sqrt(y);
  return std::sqrt(y / 3.0) / std::numbers::pi * bessel_k(1.0 / 3.0, zeta);
}

}  // namespace levy::sf
