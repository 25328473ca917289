#include <cmath>
#include <functional>
#include <limits>
#include <sstream>

#include "levy/error.hpp"
#include "levy/laplace.hpp"
#include "levy/transform.hpp"

namespace levy {

namespace {

using Probe = CheckValue;

VerifyReport run_suite(std::string id, const std::vector<double>& grid, double tol, Metric metric,
                       const std::function<Probe(double)>& probe) {
  if (grid.empty()) throw ConfigError("verification grid is empty");
  if (!(tol > 0.0)) throw ConfigError("verification tolerance must be positive");
  VerifyReport r;
  r.identity_id = std::move(id);
  r.grid = grid;
  r.tol = tol;
  r.metric = metric;
  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (double g : grid) {
    try {
      const Probe pr = probe(g);
      const double res = std::abs(pr.computed - pr.reference);
      r.residuals.push_back(res);
      r.reference.push_back(pr.reference);
      r.max_abs_err = std::max(r.max_abs_err, res);
      r.max_rel_err = std::max(r.max_rel_err, res / std::abs(pr.reference));
    } catch (const std::exception& e) {
      std::ostringstream os;
      os << "at " << g << ": " << e.what();
      r.failures.push_back(os.str());
      r.residuals.push_back(nan);
      r.reference.push_back(nan);
    }
  }
  if (!r.failures.empty()) {
    r.max_abs_err = r.max_rel_err = std::numeric_limits<double>::infinity();
  }
  const double m = metric == Metric::Abs ? r.max_abs_err : r.max_rel_err;
  r.passed = r.failures.empty() && m <= tol;
  return r;
}

std::string tag(Reference ref) { return ref == Reference::Falsified ? "+falsified" : ""; }

DensityHandle closed_or_throw(const StableIndex& a) {
  if (!has_closed_form(a))
    throw UnsupportedIndex("verification needs a closed-form density for alpha = " + a.str());
  return DensityHandle::closed(a);
}

double certified_levy2(const DensityHandle& kernel, const Integrand& f, double x) {
  const Levy2Result r = levy2_apply({kernel, f, std::nullopt}, x);
  if (!r.converged) {
    std::ostringstream os;
    os << "Levy2 integral not certified at x = " << x;
    throw QuadError(os.str(), x);
  }
  return r.value;
}

}  // namespace

VerifyReport run_checks(std::string identity_id, const std::vector<double>& grid, double tol,
                        Metric metric, const std::function<CheckValue(double)>& probe) {
  return run_suite(std::move(identity_id), grid, tol, metric, probe);
}

VerifyReport verify_char(const DensityHandle& d, const std::vector<double>& p_grid, double tol,
                         const CharOptions& options) {
  const double t = options.t;
  if (!(t > 0.0)) throw ConfigError("kernel scale t must be positive");
  const StableIndex claimed = options.claimed_alpha.value_or(d.index());
  const double a_claim = claimed.value();
  std::ostringstream id;
  id << "char[alpha=" << d.index().str();
  if (claimed != d.index()) id << ",claimed=" << claimed.str();
  if (t != 1.0) id << ",t=" << t;
  id << "]";
  const double stretch = std::pow(t, d.index().inverse());
  return run_suite(id.str(), p_grid, tol, Metric::Abs, [&](double p) {
    QuadPlan plan = plan_for_density(d, p);
    if (t != 1.0) {
      plan.split_scale *= stretch;
      if (plan.origin_hint) plan.origin_hint->c *= std::pow(stretch, plan.origin_hint->rho);
    }
    const double v = laplace_numeric(
        [&](double x) { return t == 1.0 ? d(x) : kernel_kappa(d, t, x); }, p, plan);
    return Probe{v, std::exp(-t * std::pow(p, a_claim))};
  });
}

VerifyReport verify_scaling(const StableIndex& alpha, const Integrand& f, const Integrand& image,
                            const std::vector<double>& p_grid, double tol, Reference ref) {
  if (!f || !image) throw ConfigError("scaling check needs f and its Laplace image");
  const DensityHandle g = closed_or_throw(alpha);
  return run_suite("scaling[alpha=" + alpha.str() + "]" + tag(ref), p_grid, tol, Metric::Abs,
                   [&](double p) {
                     const double v = laplace_numeric(
                         [&](double x) { return certified_levy2(g, f, x); }, p, laplace_plan(p));
                     const double q = ref == Reference::Genuine ? std::pow(p, alpha.value()) : p;
                     return Probe{v, image(q)};
                   });
}

VerifyReport verify_commute(const StableIndex& alpha, const StableIndex& beta,
                            const std::vector<double>& x_grid, double tol, Reference ref) {
  const DensityHandle ga = closed_or_throw(alpha), gb = closed_or_throw(beta);
  if (ref == Reference::Falsified && alpha == beta)
    throw ConfigError("falsified commutation check needs two different indices");
  // Genuine: L_b[g_a]. Falsified: L_a[g_a], which belongs to a different index.
  const DensityHandle& k2 = ref == Reference::Genuine ? gb : ga;
  return run_suite("commute[" + alpha.str() + "," + beta.str() + "]" + tag(ref), x_grid, tol,
                   Metric::Rel, [&](double x) {
                     const double ab = certified_levy2(ga, [&](double t) { return gb(t); }, x);
                     const double ba = certified_levy2(k2, [&](double t) { return ga(t); }, x);
                     return Probe{ab, ba};
                   });
}

VerifyReport verify_efros(const StableIndex& alpha, const StableIndex& beta,
                          const std::vector<double>& p_grid, double tol, Reference ref) {
  const DensityHandle ga = closed_or_throw(alpha), gb = closed_or_throw(beta);
  const StableIndex ab = alpha * beta;
  auto inner = [&](double x) { return certified_levy2(ga, [&](double t) { return gb(t); }, x); };
  return run_suite("efros[" + alpha.str() + "," + beta.str() + "]" + tag(ref), p_grid, tol,
                   Metric::Abs, [&](double p) {
                     const double want = ref == Reference::Genuine
                                             ? std::exp(-std::pow(p, ab.value()))
                                             : std::exp(-std::pow(p, alpha.value()));
                     double v = laplace_numeric(inner, p, plan_for_density(ab, p));
                     if (has_closed_form(ab)) {
                       // Also the image of g_ab itself; report the worse of the two.
                       const DensityHandle gab = DensityHandle::closed(ab);
                       const double w = laplace_numeric([&](double x) { return gab(x); }, p,
                                                        plan_for_density(gab, p));
                       if (std::abs(w - want) > std::abs(v - want)) v = w;
                     }
                     return Probe{v, want};
                   });
}

}  // namespace levy
