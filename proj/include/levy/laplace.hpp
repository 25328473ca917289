#pragma once

// Numerical Laplace transform on (0, inf) and the identity checks built on it.

#include <functional>
#include <json.hpp>
#include <optional>
#include <string>
#include <vector>

#include "levy/densities.hpp"
#include "levy/quad.hpp"
#include "levy/stable_index.hpp"

namespace levy {

/// int_0^inf e^-px f(x) dx. Throws QuadError (at = p) if the integral is not
/// certified to the plan's tolerance.
double laplace_numeric(const Integrand& f, double p, const QuadPlan& plan);
QuadResult laplace_quad(const Integrand& f, double p, const QuadPlan& plan);

/// Plan for the damped integral of a function with no known structure: split
/// near 1/p, abs 1e-12, rel 1e-10.
QuadPlan laplace_plan(double p);

enum class Metric { Abs, Rel };

struct VerifyReport {
  std::string identity_id;
  std::vector<double> grid;
  /// |computed - reference|; NaN where the computation failed.
  std::vector<double> residuals;
  std::vector<double> reference;
  double max_abs_err = 0.0;
  double max_rel_err = 0.0;
  double tol = 0.0;
  Metric metric = Metric::Abs;
  bool passed = false;
  /// One message per failed grid point.
  std::vector<std::string> failures;
};

nlohmann::json to_json(const VerifyReport& r);

struct CheckValue {
  double computed;
  double reference;
};

/// Evaluates `probe` at each grid point and assembles the report. An exception
/// at a point marks that point failed.
VerifyReport run_checks(std::string identity_id, const std::vector<double>& grid, double tol,
                        Metric metric, const std::function<CheckValue(double)>& probe);

/// Which reference a suite compares against. Falsified swaps in a plausible
/// but wrong identity; the report must then fail.
enum class Reference { Genuine, Falsified };

struct CharOptions {
  /// Checks int e^-px kappa_a(t, x) dx = e^{-t p^a} instead of t = 1.
  double t = 1.0;
  /// Index used in the reference; defaults to the density's own.
  std::optional<StableIndex> claimed_alpha;
};

/// |L[d](p) - e^{-t p^a}| on the grid, absolute metric.
VerifyReport verify_char(const DensityHandle& d, const std::vector<double>& p_grid, double tol,
                         const CharOptions& options = {});

/// |L[L_a f](p) - F(p^a)|, absolute metric. The falsified reference drops the
/// index and uses F(p).
VerifyReport verify_scaling(const StableIndex& alpha, const Integrand& f, const Integrand& image,
                            const std::vector<double>& p_grid, double tol,
                            Reference ref = Reference::Genuine);

/// Relative gap between L_a[g_b] and L_b[g_a] on the x grid. The falsified
/// check pits L_a[g_b] against L_a[g_a] and needs a != b.
VerifyReport verify_commute(const StableIndex& alpha, const StableIndex& beta,
                            const std::vector<double>& x_grid, double tol,
                            Reference ref = Reference::Genuine);

/// Laplace image of the inner integral int g_b(t) kappa_a(t, x) dt against
/// e^{-p^{ab}} and, when g_ab has a closed form, the image of g_ab as well.
/// Absolute metric; the falsified reference is e^{-p^a}.
VerifyReport verify_efros(const StableIndex& alpha, const StableIndex& beta,
                          const std::vector<double>& p_grid, double tol,
                          Reference ref = Reference::Genuine);

}  // namespace levy
