#pragma once

// One-sided Levy stable densities g_alpha(x), Laplace image exp(-p^alpha).
//
// Closed forms exist for alpha in {1/2, 1/3, 2/3, 1/4, 1/6}. Other indices are
// reached by composition (see transform.hpp) and carried around as a
// DensityHandle backed either by a live integral or by a tabulated
// interpolant of ln g against ln x.

#include <functional>
#include <memory>
#include <optional>
#include <utility>
#include <variant>
#include <vector>

#include "levy/quad.hpp"
#include "levy/stable_index.hpp"

namespace levy {

bool has_closed_form(const StableIndex& alpha);

/// g_alpha(x) for one of the five closed-form indices. Throws DomainError for
/// x <= 0 and UnsupportedIndex for any other alpha.
double eval_closed(const StableIndex& alpha, double x);

// Individual representations, exposed for cross-checks.
namespace forms {
double half(double x);
double third_bessel(double x);
double third_airy(double x);
double two_thirds_bessel(double x);
/// Two Kummer 1F1 terms summed in double; only accurate for x >~ 0.2, where
/// the terms do not cancel.
double two_thirds_kummer(double x);
/// ln g_{2/3}(x) from the Bessel form; finite where g itself underflows.
double log_two_thirds_bessel(double x);
/// ln g_{2/3}(x) from the Kummer form in multiple precision, with the working
/// precision raised until two successive evaluations agree.
double log_two_thirds_kummer_mp(double x);
double quarter_series(double x);
double quarter_integral(double x);
double sixth_series(double x);
double sixth_integral(double x);
}  // namespace forms

/// Constants of the small-x law g ~ K x^b exp(-c x^-rho) for index a.
struct OriginLaw {
  double c;
  double rho;
  double b;
};
OriginLaw origin_law(double alpha);

/// Large-x expansion
///   g(x) = -(1/pi) sum_k (-1)^k Gamma(a k + 1) sin(pi a k) / k! x^(-a k - 1),
/// convergent for every x > 0 when a < 1; used well past the mode only.
double large_x_series(double alpha, double x);

/// Chebyshev fit of ln g against u = ln x on [u_lo, u_hi], with asymptotic
/// extrapolation on both sides.
class ChebLogInterpolant {
 public:
  ChebLogInterpolant(double u_lo, double u_hi, std::vector<double> coeffs,
                     double tail_exponent, double origin_c, double origin_rho);

  double operator()(double x) const;
  /// ln g at u = ln x.
  double log_eval(double u) const;
  /// Chebyshev part only, valid on [u_lo, u_hi].
  double interior(double u) const;

  double u_lo() const { return u_lo_; }
  double u_hi() const { return u_hi_; }
  const std::vector<double>& coeffs() const { return coeffs_; }
  double tail_exponent() const { return tail_exponent_; }
  double origin_c() const { return origin_c_; }
  double origin_rho() const { return origin_rho_; }
  /// Relative jump between interior and extrapolation at u_hi before the
  /// tail series is anchored.
  double raw_seam_gap() const { return raw_seam_gap_; }

 private:
  double tail(double u) const;

  double u_lo_, u_hi_;
  std::vector<double> coeffs_;
  double tail_exponent_, origin_c_, origin_rho_;
  double origin_b_;
  double ln_at_lo_;
  double tail_anchor_;
  double raw_seam_gap_;
};

/// Evaluable density. Immutable and cheap to copy.
class DensityHandle {
 public:
  /// Throws UnsupportedIndex if alpha has no closed form.
  static DensityHandle closed(const StableIndex& alpha);
  static DensityHandle tabulated(std::vector<StableIndex> chain,
                                 std::shared_ptr<const ChebLogInterpolant> table);
  /// Density evaluated on demand by `eval` (one integral per call).
  static DensityHandle live(std::vector<StableIndex> chain,
                            std::function<double(double)> eval);

  /// g(x); DomainError for x <= 0.
  double operator()(double x) const;

  StableIndex index() const { return index_; }
  double alpha() const { return index_.value(); }
  bool is_closed() const { return std::holds_alternative<StableIndex>(form_); }
  bool is_tabulated() const;
  /// Composition provenance; a single entry for closed forms.
  const std::vector<StableIndex>& chain() const { return chain_; }
  /// Interpolant of a tabulated handle, nullptr otherwise.
  std::shared_ptr<const ChebLogInterpolant> table() const;

 private:
  using Live = std::function<double(double)>;
  using Table = std::shared_ptr<const ChebLogInterpolant>;

  DensityHandle(StableIndex index, std::vector<StableIndex> chain,
                std::variant<StableIndex, Table, Live> form)
      : index_(index), chain_(std::move(chain)), form_(std::move(form)) {}

  StableIndex index_;
  std::vector<StableIndex> chain_;
  std::variant<StableIndex, Table, Live> form_;
};

/// kappa_a(t, x) = t^(-1/a) g_a(x t^(-1/a)), with a the index of `g`.
double kernel_kappa(const DensityHandle& g, double t, double x);

/// Decay exponent E of g ~ x^-E over [window.first, window.second]. Fits
/// ln g = A - E ln x + B x^-(E-1), i.e. the leading power law together with
/// its first correction, whose exponent follows from E itself. Throws
/// ConfigError if the window spans less than half a decade or starts below 10.
double tail_exponent(const DensityHandle& g, std::pair<double, double> window);

/// Plain least-squares slope of ln g against ln x, negated. Biased low for
/// small alpha because of the x^-alpha correction to the tail.
double local_tail_slope(const DensityHandle& g, std::pair<double, double> window);

/// Quadrature plan for integrands g(x) exp(-p x): tail hint 1 + alpha, origin
/// hint from the small-x law, split at the mode of the (damped) density.
QuadPlan plan_for_density(const DensityHandle& g, std::optional<double> p_damping = {});
QuadPlan plan_for_density(const StableIndex& alpha, std::optional<double> p_damping = {});

}  // namespace levy
