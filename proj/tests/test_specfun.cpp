#include <boost/math/special_functions/hypergeometric_1F1.hpp>
#include <cmath>
#include <numbers>
#include <vector>

#include "doctest.h"
#include "levy/error.hpp"
#include "levy/specfun.hpp"
#include "oracle.hpp"

using namespace levy;
using oracle::rel;

namespace {

std::vector<double> log_grid(double lo, double hi, int n) {
  std::vector<double> xs;
  for (int i = 0; i < n; ++i) xs.push_back(lo * std::pow(hi / lo, static_cast<double>(i) / (n - 1)));
  return xs;
}

// Brute-force partial sums of pFq at 200 decimal digits.
using mp200 = boost::multiprecision::number<boost::multiprecision::cpp_dec_float<200>>;
mp200 brute_pfq(const std::vector<mp200>& a, const std::vector<mp200>& b, mp200 z, int terms) {
  mp200 sum = 1, term = 1;
  for (int n = 0; n < terms; ++n) {
    for (const auto& ai : a) term *= ai + n;
    for (const auto& bj : b) term /= bj + n;
    term *= z / (n + 1);
    sum += term;
  }
  return sum;
}

}  // namespace

TEST_CASE("gamma: exact values and high-precision oracle") {
  CHECK(sf::gamma(1.0) == 1.0);
  CHECK(sf::gamma(5.0) == 24.0);
  CHECK(rel(sf::gamma(0.5), std::sqrt(std::numbers::pi)) < 2.3e-16);
  // Gamma(2/3) = 1.3541179394264004169... (30-digit reference)
  CHECK(rel(sf::gamma(2.0 / 3.0), 1.3541179394264004169) < 1e-14);
  CHECK(rel(sf::gamma(2.0 / 3.0), oracle::gamma(2.0 / 3.0)) < 1e-14);

  double worst = 0.0;
  for (double x : log_grid(0.1, 50.0, 400)) worst = std::max(worst, rel(sf::gamma(x), oracle::gamma(x)));
  MESSAGE("gamma worst relative error on [0.1, 50]: " << worst);
  CHECK(worst <= 1e-14);
}

TEST_CASE("gamma: reflection and poles") {
  CHECK(rel(sf::gamma(-0.5), -2.0 * std::sqrt(std::numbers::pi)) < 1e-15);
  CHECK(rel(sf::gamma(-2.3), oracle::gamma(-2.3)) < 1e-14);
  CHECK_THROWS_AS(sf::gamma(0.0), DomainError);
  CHECK_THROWS_AS(sf::gamma(-3.0), DomainError);
}

TEST_CASE("hyper_pfq: trivial identities") {
  auto r0 = sf::hyper_pfq({{}, {1.25, 1.5}, 0.0}, 1e-15);
  CHECK(r0.value == 1.0);
  CHECK(r0.converged);

  auto e = sf::hyper_pfq({{1.0}, {1.0}, 1.0}, 1e-15);
  CHECK(e.converged);
  CHECK(rel(e.value, std::numbers::e) < 2e-16);
  CHECK(e.est_rel_error <= 1e-15);
}

TEST_CASE("hyper_pfq: 0F4 at the g_{1/6} argument against 200-digit summation") {
  const std::vector<mp200> b = {mp200(1) / 3, mp200(1) / 2, mp200(2) / 3, mp200(5) / 6};
  const mp200 z = mp200(-1) / 46656;
  const double want = static_cast<double>(brute_pfq({}, b, z, 40));
  auto r = sf::hyper_pfq({{}, {1.0 / 3, 0.5, 2.0 / 3, 5.0 / 6}, -1.0 / 46656}, 1e-15);
  CHECK(r.converged);
  CHECK(rel(r.value, want) < 1e-13);
  CHECK(rel(r.value, 0.99976851892445539415) < 1e-13);
}

TEST_CASE("hyper_pfq: partial sums follow the term recurrence") {
  // Random parameter sets, compared with a brute-force sum over the same
  // number of terms the implementation reports.
  const std::vector<sf::HyperParams> cases = {
      {{}, {0.75, 1.25}, -3.7},
      {{0.5}, {1.5}, -2.0},
      {{}, {0.5, 0.75}, -0.39},
      {{}, {7.0 / 6, 4.0 / 3, 1.5, 5.0 / 3}, -12.0},
      {{1.0, 1.0}, {1.5}, 0.45},
  };
  for (const auto& p : cases) {
    auto r = sf::hyper_pfq(p, 1e-15);
    REQUIRE(r.converged);
    std::vector<mp200> a, b;
    for (double v : p.numer) a.emplace_back(v);
    for (double v : p.denom) b.emplace_back(v);
    const double want = static_cast<double>(brute_pfq(a, b, mp200(p.arg), 400));
    CHECK(rel(r.value, want) < 1e-14);
  }
}

TEST_CASE("hyper_pfq: cancellation triggers the multiple-precision re-sum") {
  // 1F1(5/6; 2/3; -60): terms reach ~e^60 while the value is ~60^{-5/6}.
  using oracle::mp50;
  const double want = static_cast<double>(
      boost::math::hypergeometric_1F1(mp50(5) / 6, mp50(2) / 3, mp50(-60)));
  auto r = sf::hyper_pfq({{5.0 / 6}, {2.0 / 3}, -60.0}, 1e-13);
  CHECK(r.converged);
  CHECK(rel(r.value, want) < 1e-13);

  // Large enough to overflow double terms; still a finite, correct value.
  const double want2 = static_cast<double>(
      boost::math::hypergeometric_1F1(mp50(7) / 6, mp50(4) / 3, mp50(-900)));
  auto r2 = sf::hyper_pfq({{7.0 / 6}, {4.0 / 3}, -900.0}, 1e-13);
  CHECK(r2.converged);
  CHECK(rel(r2.value, want2) < 1e-12);
}

TEST_CASE("hyper_pfq: non-convergence is reported, not hidden") {
  sf::SeriesOptions opts;
  opts.max_terms = 5;
  auto r = sf::hyper_pfq({{}, {0.5, 0.75}, -50.0}, 1e-14, opts);
  CHECK_FALSE(r.converged);
  CHECK(r.est_rel_error > 1e-14);
}

TEST_CASE("hyper_pfq: parameter domain") {
  CHECK_THROWS_AS(sf::hyper_pfq({{}, {0.0}, 1.0}, 1e-14), DomainError);
  CHECK_THROWS_AS(sf::hyper_pfq({{}, {-2.0}, 1.0}, 1e-14), DomainError);
  CHECK_THROWS_AS(sf::hyper_pfq({{1.0, 2.0, 3.0}, {1.5}, 0.1}, 1e-14), DomainError);
  CHECK_THROWS_AS(sf::hyper_pfq({{1.0, 2.0}, {1.5}, 1.5}, 1e-14), DomainError);
  CHECK_NOTHROW(sf::hyper_pfq({{}, {-2.5}, 1.0}, 1e-14));
}

TEST_CASE("bessel_k: half order closed form") {
  double worst = 0.0;
  for (double x : log_grid(0.01, 30.0, 200)) {
    const double want = std::sqrt(std::numbers::pi / (2 * x)) * std::exp(-x);
    worst = std::max(worst, rel(sf::bessel_k(0.5, x), want));
  }
  CHECK(worst < 1e-13);
  CHECK(rel(sf::bessel_k(0.5, 1.0), 0.46106850444789455844) < 1e-15);
}

TEST_CASE("bessel_k: orders 1/3, 2/3 and 0 against Boost at 50 digits") {
  using oracle::mp50;
  const std::vector<mp50> orders = {mp50(1) / 3, mp50(2) / 3, mp50(0), mp50(1) / 10, mp50(9) / 10};
  for (const auto& nu : orders) {
    double worst = 0.0;
    for (double x : log_grid(1e-3, 50.0, 300)) {
      worst = std::max(worst, rel(sf::bessel_k(static_cast<double>(nu), x), oracle::bessel_k(nu, x)));
    }
    MESSAGE("nu=" << static_cast<double>(nu) << " worst rel " << worst);
    CHECK(worst <= 1e-12);
  }
}

TEST_CASE("bessel_k: both branches agree across the switchover and scale correctly") {
  for (double nu : {0.0, 1.0 / 3, 2.0 / 3}) {
    const double below = sf::bessel_k(nu, std::nextafter(2.0, 0.0));
    const double above = sf::bessel_k(nu, std::nextafter(2.0, 3.0));
    CHECK(rel(below, above) < 1e-13);
    for (double x : {0.5, 3.0, 40.0})
      CHECK(rel(sf::bessel_k_scaled(nu, x), sf::bessel_k(nu, x) * std::exp(x)) < 1e-14);
  }
  // Far beyond the underflow of K itself the scaled value keeps its asymptote.
  const double x = 2000.0;
  CHECK(rel(sf::bessel_k_scaled(1.0 / 3, x), std::sqrt(std::numbers::pi / (2 * x))) < 1e-4);
}

TEST_CASE("bessel_k: large-x asymptote") {
  for (double x : {50.0, 200.0, 600.0}) {
    const double ratio = sf::bessel_k_scaled(1.0 / 3, x) / std::sqrt(std::numbers::pi / (2 * x));
    CHECK(std::fabs(ratio - 1.0) < (4.0 / 9 - 1) / (-8 * x) * 1.01 + 1e-14);
  }
  CHECK_THROWS_AS(sf::bessel_k(1.0 / 3, 0.0), DomainError);
  CHECK_THROWS_AS(sf::bessel_k(1.0 / 3, -1.0), DomainError);
  CHECK_THROWS_AS(sf::bessel_k(1.5, 1.0), DomainError);
}

TEST_CASE("airy_ai: value at zero and identity with K_{1/3}") {
  const double ai0 = std::pow(3.0, -2.0 / 3.0) / oracle::gamma(2.0 / 3.0);
  CHECK(rel(sf::airy_ai(0.0), ai0) < 1e-15);
  CHECK(rel(sf::airy_ai(0.0), 0.35502805388781723926) < 1e-15);
  for (double y : {1e-6, 0.1, 1.0, 2.5, 10.0, 30.0}) CHECK(rel(sf::airy_ai(y), oracle::airy_ai(y)) < 1e-12);
  CHECK_THROWS_AS(sf::airy_ai(-0.1), DomainError);
}

TEST_CASE("gamma0_incomplete: oracle and asymptote") {
  CHECK(rel(sf::gamma0_incomplete(1.0), 0.21938393439552027368) < 1e-15);
  double worst = 0.0;
  for (double x : log_grid(1e-3, 100.0, 200)) worst = std::max(worst, rel(sf::gamma0_incomplete(x), oracle::e1(x)));
  CHECK(worst <= 1e-12);
  for (double x : {50.0, 200.0, 1000.0}) {
    // x e^x E1(x) = 1 - 1/x + 2/x^2 - ...
    const double lead = x * sf::gamma0_incomplete_scaled(x);
    CHECK(std::fabs(lead - (1 - 1 / x + 2 / (x * x))) < 7 / (x * x * x));
  }
  CHECK_THROWS_AS(sf::gamma0_incomplete(0.0), DomainError);
}

TEST_CASE("arc_ratio: values, continuity and monotonicity") {
  CHECK(sf::arc_ratio(1.0) == 1.0);
  // (pi/3)/(sqrt(3)/2) and arccosh(2)/sqrt(3)
  CHECK(rel(sf::arc_ratio(0.5), 1.2091995761561452337) < 1e-15);
  CHECK(rel(sf::arc_ratio(2.0), 0.76034599630094634753) < 1e-15);
  CHECK(std::fabs(sf::arc_ratio(1.0 + 1e-8) - 1.0) < 1e-7);
  CHECK(std::fabs(sf::arc_ratio(1.0 - 1e-8) - 1.0) < 1e-7);
  // Seam of the series branch.
  for (double w : {1.0 - 1e-4, 1.0 + 1e-4}) {
    const double inside = sf::arc_ratio(std::nextafter(w, 1.0));
    const double outside = sf::arc_ratio(std::nextafter(w, w < 1 ? 0.0 : 2.0));
    CHECK(rel(inside, outside) < 1e-12);
  }
  double prev = sf::arc_ratio(1e-6);
  for (double w : log_grid(1e-6 * 1.01, 1e6, 2000)) {
    const double v = sf::arc_ratio(w);
    CHECK(v < prev);
    prev = v;
  }
  CHECK_THROWS_AS(sf::arc_ratio(0.0), DomainError);
}
