#include <boost/math/tools/minima.hpp>
#include <cmath>
#include <numbers>

#include "doctest.h"
#include "levy/densities.hpp"
#include "levy/error.hpp"

using namespace levy;

namespace {

DensityHandle closed(long l, long k) { return DensityHandle::closed(StableIndex(l, k)); }

struct Ref {
  long l, k;
  double x, value;
};

// 40-digit values. Each form was evaluated with mpmath and, for
// 0.5 <= x <= 100, checked against the inversion integral
// g(x) = (1/pi) int_0^inf exp(-x u - u^a cos(pi a)) sin(u^a sin(pi a)) du.
const Ref kRefs[] = {
    {1, 2, 0.01, 3.9177166327543338271e-9},
    {1, 2, 1.0, 0.21969564473386119852},
    {1, 2, 1e4, 2.8208773949223768433e-7},
    {1, 3, 0.005, 0.6891204215586914741},
    {1, 3, 0.1, 1.0808428511430147223},
    {1, 3, 1.0, 0.13207982656883419686},
    {1, 3, 1e4, 1.1157852619749567788e-6},
    {2, 3, 0.05, 2.7645623717420766169e-24},
    {2, 3, 0.1, 0.000013871723829265306138},
    {2, 3, 0.5, 0.85793533133195929115},
    {2, 3, 1.0, 0.35056807592011157921},
    {2, 3, 100.0, 0.00011904158294960659491},
    {2, 3, 1e4, 5.3690309946893131053e-8},
    {1, 4, 0.005, 5.3326913958289416236},
    {1, 4, 0.01, 4.1591937703415100815},
    {1, 4, 0.1, 0.87595308731363606352},
    {1, 4, 1.0, 0.095833854142670883944},
    {1, 4, 1e3, 0.000032012283814809431246},
    {1, 6, 0.005, 8.2222528634063483925},
    {1, 6, 0.02, 2.6031310770123843495},
    {1, 6, 0.05, 1.1480313737617539549},
    {1, 6, 1.0, 0.062437101953106451432},
    {1, 6, 1e3, 0.000035770263701817906311},
    {1, 6, 1e4, 2.6545935861870419696e-6},
};

std::vector<double> log_grid(double lo, double hi, int n) {
  std::vector<double> g(n);
  for (int i = 0; i < n; ++i) g[i] = lo * std::pow(hi / lo, double(i) / (n - 1));
  return g;
}

const std::pair<long, long> kFive[] = {{1, 2}, {1, 3}, {2, 3}, {1, 4}, {1, 6}};

}  // namespace

TEST_CASE("closed forms against high-precision values") {
  for (const auto& r : kRefs) {
    CAPTURE(r.l);
    CAPTURE(r.k);
    CAPTURE(r.x);
    CHECK(std::abs(eval_closed(StableIndex(r.l, r.k), r.x) / r.value - 1.0) <= 1e-12);
  }
}

TEST_CASE("mode of the index-1/2 density is at 1/6") {
  auto neg = [](double x) { return -forms::half(x); };
  auto m = boost::math::tools::brent_find_minima(neg, 0.05, 1.0, 52);
  CHECK(std::abs(m.first - 1.0 / 6.0) <= 1e-8);
}

TEST_CASE("argument and index errors") {
  CHECK_THROWS_AS(eval_closed(StableIndex(1, 2), 0.0), DomainError);
  CHECK_THROWS_AS(eval_closed(StableIndex(1, 2), -1.0), DomainError);
  CHECK_THROWS_AS(eval_closed(StableIndex(2, 5), 1.0), UnsupportedIndex);
  CHECK_THROWS_AS(DensityHandle::closed(StableIndex(1, 5)), UnsupportedIndex);
  CHECK_FALSE(has_closed_form(StableIndex(3, 4)));
  CHECK(has_closed_form(StableIndex(2, 3)));
}

TEST_CASE("series and integral forms agree across the switch points") {
  for (double x : {0.002, 0.005, 0.01, 0.02, 0.05}) {
    CAPTURE(x);
    CHECK(std::abs(forms::quarter_series(x) / forms::quarter_integral(x) - 1.0) <= 1e-12);
    CHECK(std::abs(forms::sixth_series(x) / forms::sixth_integral(x) - 1.0) <= 1e-12);
  }
}

TEST_CASE("Bessel and Airy forms of index 1/3 agree") {
  for (double x : log_grid(1e-2, 1e2, 41)) {
    CAPTURE(x);
    CHECK(std::abs(forms::third_airy(x) / forms::third_bessel(x) - 1.0) <= 1e-11);
  }
}

TEST_CASE("Bessel and Kummer forms of index 2/3 agree") {
  // Below x ~ 0.2 the Kummer terms cancel like exp(-4/(27 x^2)); compare logs
  // with the multiple-precision sum there.
  for (double x : log_grid(1e-2, 1e2, 13)) {
    CAPTURE(x);
    const double lb = forms::log_two_thirds_bessel(x);
    CHECK(std::abs(forms::log_two_thirds_kummer_mp(x) - lb) <= 1e-10);
  }
  for (double x : log_grid(0.2, 1e2, 30)) {
    CAPTURE(x);
    CHECK(std::abs(forms::two_thirds_kummer(x) / forms::two_thirds_bessel(x) - 1.0) <= 1e-12);
  }
}

TEST_CASE("large-x series matches the closed forms in the tail") {
  for (auto [l, k] : kFive) {
    const StableIndex a(l, k);
    for (double x : {1e3, 1e4, 1e6}) {
      CAPTURE(a.str());
      CAPTURE(x);
      CHECK(std::abs(large_x_series(a.value(), x) / eval_closed(a, x) - 1.0) <= 1e-12);
    }
  }
}

TEST_CASE("closed forms are normalised and non-negative") {
  for (auto [l, k] : kFive) {
    auto g = closed(l, k);
    CAPTURE(g.index().str());
    auto r = integrate([&](double x) { return g(x); }, plan_for_density(g));
    CHECK(r.converged);
    CHECK(std::abs(r.value - 1.0) <= 1e-9);
    for (double x : log_grid(1e-3, 1e4, 200)) CHECK(g(x) >= 0.0);
  }
  for (double x : log_grid(0.2, 1e4, 100)) CHECK(forms::two_thirds_kummer(x) >= -1e-12);
  for (double x : log_grid(1e-2, 1e4, 100)) CHECK(forms::quarter_series(x) >= -1e-12);
  for (double x : log_grid(2e-2, 1e4, 100)) CHECK(forms::sixth_series(x) >= -1e-12);
}

TEST_CASE("Laplace transform is exp(-p^alpha)") {
  for (auto [l, k] : kFive) {
    auto g = closed(l, k);
    for (double p : {0.1, 0.5, 1.0, 2.0, 5.0, 10.0}) {
      CAPTURE(g.index().str());
      CAPTURE(p);
      auto r = integrate([&](double x) { return std::exp(-p * x) * g(x); },
                         plan_for_density(g, p));
      CHECK(r.converged);
      CHECK(std::abs(r.value - std::exp(-std::pow(p, g.alpha()))) <= 1e-8);
    }
  }
}

TEST_CASE("scaled kernel") {
  auto g = closed(1, 2);
  for (double x : {0.01, 0.3, 1.0, 7.0}) CHECK(kernel_kappa(g, 1.0, x) == doctest::Approx(g(x)).epsilon(1e-15));

  // t^-2 g(x/t^2) = t/(2 sqrt(pi)) x^-3/2 exp(-t^2/(4x))
  const double t = 2.0, x = 1.0;
  const double direct = t / (2.0 * std::sqrt(std::numbers::pi)) * std::exp(-t * t / (4.0 * x));
  CHECK(std::abs(kernel_kappa(g, t, x) / direct - 1.0) <= 1e-14);
  CHECK(std::abs(kernel_kappa(g, t, x) - 0.25 * g(0.25)) <= 1e-16);

  for (auto [l, k] : kFive) {
    auto h = closed(l, k);
    for (double tt : {0.5, 1.0, 2.0}) {
      CAPTURE(h.index().str());
      CAPTURE(tt);
      QuadPlan plan = plan_for_density(h);
      plan.split_scale *= std::pow(tt, h.index().inverse());
      plan.origin_hint.reset();
      auto r = integrate([&](double xx) { return kernel_kappa(h, tt, xx); }, plan);
      CHECK(std::abs(r.value - 1.0) <= 1e-9);
    }
  }
  CHECK_THROWS_AS(kernel_kappa(g, 0.0, 1.0), DomainError);
  CHECK(kernel_kappa(g, 1e-200, 1.0) > 0.0);
  CHECK(kernel_kappa(g, 1e200, 1.0) == 0.0);
}

TEST_CASE("scaled kernel Laplace law exp(-t p^alpha)") {
  for (auto [l, k] : {std::pair{1L, 2L}, {1L, 3L}, {2L, 3L}}) {
    auto h = closed(l, k);
    for (double t : {0.5, 2.0}) {
      for (double p : {1.0, 4.0}) {
        CAPTURE(h.index().str());
        CAPTURE(t);
        CAPTURE(p);
        QuadPlan plan = plan_for_density(h, p);
        plan.split_scale *= std::pow(t, h.index().inverse());
        plan.origin_hint.reset();
        auto r = integrate(
            [&](double x) { return std::exp(-p * x) * kernel_kappa(h, t, x); }, plan);
        CHECK(std::abs(r.value - std::exp(-t * std::pow(p, h.alpha()))) <= 1e-8);
      }
    }
  }
}

TEST_CASE("tail exponent") {
  for (auto [l, k] : kFive) {
    auto g = closed(l, k);
    CAPTURE(g.index().str());
    CHECK(std::abs(tail_exponent(g, {1e3, 1e4}) - (1.0 + g.alpha())) <= 0.01);
  }
  // The plain slope is dragged down by the x^-alpha correction.
  CHECK(local_tail_slope(closed(1, 6), {1e3, 1e4}) < 1.14);
  CHECK(std::abs(local_tail_slope(closed(1, 2), {1e3, 1e4}) - 1.5) <= 0.01);

  CHECK_THROWS_AS(tail_exponent(closed(1, 2), {1e3, 2e3}), ConfigError);
  CHECK_THROWS_AS(tail_exponent(closed(1, 2), {5.0, 1e3}), ConfigError);
}

TEST_CASE("density plans") {
  CHECK(plan_for_density(StableIndex(1, 2)).tail_decay_hint == 1.5);
  CHECK(plan_for_density(StableIndex(1, 3)).tail_decay_hint == doctest::Approx(4.0 / 3.0));
  const auto p = plan_for_density(StableIndex(1, 2));
  REQUIRE(p.origin_hint);
  CHECK(p.origin_hint->c == doctest::Approx(0.25));
  CHECK(p.origin_hint->rho == doctest::Approx(1.0));
  CHECK(std::abs(p.split_scale - 1.0 / 6.0) < 0.02);

  auto g = closed(1, 4);
  auto r = integrate([&](double x) { return g(x); }, plan_for_density(StableIndex(1, 4)));
  CHECK(std::abs(r.value - 1.0) <= 1e-9);

  // Perturbing the split by 2 moves the value by less than 10 est_error.
  for (auto [l, k] : kFive) {
    auto h = closed(l, k);
    QuadPlan base = plan_for_density(h);
    auto r0 = integrate([&](double x) { return h(x); }, base);
    for (double f : {0.5, 2.0}) {
      QuadPlan q = base;
      q.split_scale *= f;
      auto r1 = integrate([&](double x) { return h(x); }, q);
      CAPTURE(h.index().str());
      CHECK(std::abs(r1.value - r0.value) <= 10.0 * std::max(r0.est_error, r1.est_error));
    }
  }

  // Index without a closed form still gets a plan.
  auto q = plan_for_density(StableIndex(1, 8));
  CHECK(q.tail_decay_hint == 1.125);
  CHECK(q.split_scale > 0.0);
}

TEST_CASE("interpolant validation") {
  std::vector<double> c(8, 0.0);
  CHECK_THROWS_AS(ChebLogInterpolant(1.0, 0.0, c, 1.5, 0.25, 1.0), ConfigError);
  CHECK_THROWS_AS(ChebLogInterpolant(0.0, 1.0, std::vector<double>(7, 0.0), 1.5, 0.25, 1.0),
                  ConfigError);
  CHECK_THROWS_AS(ChebLogInterpolant(0.0, 1.0, c, 2.5, 0.25, 1.0), ConfigError);
}
