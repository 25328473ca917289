#include <array>
#include <cmath>
#include <limits>
#include <numbers>

#include "levy/error.hpp"
#include "levy/specfun.hpp"

namespace levy::sf {
namespace {

// Lanczos approximation, g = 7, n = 9 (Godfrey's coefficient set).
constexpr long double kLanczosG = 7.0L;
constexpr std::array<long double, 9> kLanczos = {
    0.99999999999980993227684700473478L,  676.520368121885098567009190444019L,
    -1259.13921672240287047156078755283L, 771.3234287776530788486528258894L,
    -176.61502916214059906584551354L,     12.507343278686904814458936853L,
    -0.13857109526572011689554707L,       9.984369578019570859563e-6L,
    1.50563273514931155834e-7L};

long double lanczos_gamma(long double x) {
  // x >= 0.5
  const long double z = x - 1.0L;
  long double a = kLanczos[0];
  for (std::size_t i = 1; i < kLanczos.size(); ++i) a += kLanczos[i] / (z + i);
  const long double t = z + kLanczosG + 0.5L;
  const long double sqrt_two_pi = 2.506628274631000502415765284811L;
  return sqrt_two_pi * std::pow(t, z + 0.5L) * std::exp(-t) * a;
}

// sin(pi x) with the argument reduced exactly first.
long double sin_pi(long double x) {
  long double r = std::fmod(x, 2.0L);
  if (r < 0) r += 2.0L;
  if (r > 1.0L) return -sin_pi(r - 1.0L);
  if (r > 0.5L) r = 1.0L - r;
  return std::sin(std::numbers::pi_v<long double> * r);
}

}  // namespace

double gamma(double x) {
  if (std::isnan(x)) return x;
  if (x <= 0.0 && x == std::floor(x))
    throw DomainError("gamma: pole at non-positive integer " + std::to_string(x));

  // Positive integers and half-integers: products of exact factors.
  if (x > 0.0 && x <= 171.0) {
    if (x == std::floor(x)) {
      long double f = 1.0L;
      for (int k = 2; k < static_cast<int>(x); ++k) f *= k;
      return static_cast<double>(f);
    }
    if (2.0 * x == std::floor(2.0 * x)) {
      long double f = std::sqrt(std::numbers::pi_v<long double>);
      for (long double k = 0.5L; k < x; k += 1.0L) f *= k;
      return static_cast<double>(f);
    }
  }

  const long double lx = x;
  if (lx < 0.5L) {
    return static_cast<double>(std::numbers::pi_v<long double> /
                               (sin_pi(lx) * lanczos_gamma(1.0L - lx)));
  }
  if (lx > 172.0L) return std::numeric_limits<double>::infinity();
  // Recur down to [0.5, 1.5]; the long double product keeps the error near
  // one rounding of the final cast.
  long double y = lx;
  long double scale = 1.0L;
  while (y > 1.5L) {
    y -= 1.0L;
    scale *= y;
  }
  return static_cast<double>(scale * lanczos_gamma(y));
}

}  // namespace levy::sf
