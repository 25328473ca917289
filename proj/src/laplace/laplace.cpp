#include <cmath>
#include <limits>
#include <sstream>

#include "levy/error.hpp"
#include "levy/laplace.hpp"

namespace levy {

QuadResult laplace_quad(const Integrand& f, double p, const QuadPlan& plan) {
  if (!(p > 0.0) || !std::isfinite(p)) throw DomainError("Laplace variable must be positive");
  return integrate(
      [&](double x) {
        const double v = f(x);
        // A zero density deep in the tail must not meet an underflowed damping
        // factor as 0 * inf.
        return v == 0.0 ? 0.0 : std::exp(-p * x) * v;
      },
      plan);
}

double laplace_numeric(const Integrand& f, double p, const QuadPlan& plan) {
  const QuadResult r = laplace_quad(f, p, plan);
  if (!r.converged) {
    std::ostringstream os;
    os << "Laplace integral not certified at p = " << p << " (error estimate " << r.est_error
       << ")";
    throw QuadError(os.str(), p);
  }
  return r.value;
}

QuadPlan laplace_plan(double p) {
  if (!(p > 0.0)) throw DomainError("Laplace variable must be positive");
  QuadPlan plan;
  plan.abs_tol = 1e-12;
  plan.rel_tol = 1e-10;
  plan.split_scale = 1.0 / (1.0 + p);
  return plan;
}

nlohmann::json to_json(const VerifyReport& r) {
  auto num = [](double v) { return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(); };
  nlohmann::json res = nlohmann::json::array(), ref = nlohmann::json::array();
  for (double v : r.residuals) res.push_back(num(v));
  for (double v : r.reference) ref.push_back(num(v));
  return {{"identity_id", r.identity_id},
          {"grid", r.grid},
          {"residuals", res},
          {"reference", ref},
          {"max_abs_err", num(r.max_abs_err)},
          {"max_rel_err", num(r.max_rel_err)},
          {"tol", r.tol},
          {"metric", r.metric == Metric::Abs ? "abs" : "rel"},
          {"passed", r.passed},
          {"failures", r.failures}};
}

}  // namespace levy
