#include <cmath>
#include <memory>
#include <sstream>

#include "levy/error.hpp"
#include "levy/transform.hpp"

namespace levy {

QuadPlan levy2_default_plan(const DensityHandle& kernel, double x) {
  const double a = kernel.alpha();
  const OriginLaw law = origin_law(a);
  // Mode of the small-x law K x^b exp(-c x^-rho); exact for a = 1/2.
  const double mode = std::pow(law.c * law.rho / -law.b, 1.0 / law.rho);
  QuadPlan plan;
  plan.abs_tol = 1e-200;
  plan.rel_tol = 1e-11;
  plan.split_scale = std::pow(x / mode, a);
  return plan;
}

Levy2Result levy2_apply(const TransformRequest& req, double x) {
  if (!(x > 0.0)) throw DomainError("Levy2 transform needs x > 0");
  if (!req.operand) throw ConfigError("Levy2 transform needs an operand");
  const QuadPlan plan = req.plan.value_or(levy2_default_plan(req.kernel, x));
  const auto& g = req.kernel;
  const auto& f = req.operand;
  auto r = integrate(
      [&](double t) {
        const double k = kernel_kappa(g, t, x);
        return k == 0.0 ? 0.0 : k * f(t);
      },
      plan);
  return {r.value, r.est_error, r.converged};
}

namespace {

DensityHandle live_composition(const DensityHandle& kernel, const DensityHandle& operand,
                               std::vector<StableIndex> chain) {
  auto eval = [kernel, operand](double x) {
    auto r = levy2_apply({kernel, [&operand](double t) { return operand(t); }, std::nullopt}, x);
    if (!r.converged) {
      std::ostringstream os;
      os << "composition integral did not converge at x = " << x;
      throw QuadError(os.str(), x);
    }
    return r.value;
  };
  return DensityHandle::live(std::move(chain), std::move(eval));
}

}  // namespace

DensityHandle compose(const StableIndex& alpha, const DensityHandle& beta_density,
                      const ComposeOptions& options) {
  std::vector<StableIndex> chain = beta_density.chain();
  chain.push_back(alpha);
  const StableIndex beta = beta_density.index();
  // The smoother kernel (larger index) goes inside kappa; the closed form of
  // alpha then serves as the cheap operand.
  const bool swap = options.orientation == Orientation::Auto && beta > alpha &&
                    has_closed_form(alpha);
  DensityHandle out = swap ? live_composition(beta_density, DensityHandle::closed(alpha), chain)
                           : live_composition(DensityHandle::closed(alpha), beta_density, chain);
  if (options.tabulate) return tabulated(out);
  return out;
}

DensityHandle power_chain(const StableIndex& alpha, int p, bool allow_deep, bool tabulate_last) {
  if (p < 2) throw ConfigError("power_chain needs p >= 2");
  if (p > 4 && !allow_deep)
    throw ConfigError("power_chain beyond p = 4 needs the deep-chain override");
  DensityHandle d = DensityHandle::closed(alpha);
  for (int i = 2; i <= p; ++i) {
    if (i > 2) d = tabulated(d);
    d = compose(alpha, d, {Orientation::AsWritten, false});
  }
  return tabulate_last ? tabulated(d) : d;
}

}  // namespace levy
