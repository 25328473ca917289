#pragma once

// Subordination kernel n(s, tau) = (1/(a s)) y g_a(y), y = tau s^-1/a, and the
// inverse Levy transform P_a(x, tau) = int n(s, tau) P_1(x, s) ds applied to
// the free-diffusion heat kernel P_1(x, s) = exp(-x^2/4s)/sqrt(4 pi s).

#include <functional>
#include <optional>
#include <vector>

#include "levy/densities.hpp"
#include "levy/laplace.hpp"
#include "levy/quad.hpp"
#include "levy/stable_index.hpp"

namespace levy {

double kernel_n(const DensityHandle& g, double s, double tau);
/// Closed-form indices only.
double kernel_n(const StableIndex& alpha, double s, double tau);

/// Plan for an s-integral against n(s, tau): split at the mode of n.
QuadPlan subord_plan(const StableIndex& alpha, double tau);

/// int_0^inf n(s, tau) P(s) ds.
QuadResult inverse_levy(const DensityHandle& g, const std::function<double(double)>& P,
                        double tau, std::optional<QuadPlan> plan = std::nullopt);

/// The same integral routed through levy2_apply with operand P(s)/(a s): the
/// t-convention of the Levy2 kernel leaves a factor tau, restored here.
QuadResult inverse_levy_via_levy2(const DensityHandle& g, const std::function<double(double)>& P,
                                  double tau);

struct SubordinationRequest {
  StableIndex alpha;
  double tau = 1.0;
  std::vector<double> x_grid;
  std::optional<QuadPlan> plan;
};

struct SubordPoint {
  double x = 0.0;
  double p_alpha = 0.0;
  double est_error = 0.0;
  bool converged = false;
};

std::vector<SubordPoint> subordinate_free_diffusion(const SubordinationRequest& req);

/// x-space normalisation and second moment of P_a(., tau) by the trapezoid
/// rule: spacing 0.002 (0.001 inside |x| < 0.5), out to at least
/// 12 tau^(a/2) and further until x^3 P_a(x) < 1e-11.
struct XMoments {
  double norm = 0.0;
  double second = 0.0;
  double x_max = 0.0;
  std::size_t points = 0;
};
XMoments x_moments(const StableIndex& alpha, double tau);

/// <x^2>(tau) = 2 int s n(s, tau) ds by quadrature.
double msd(const StableIndex& alpha, double tau);

/// Least-squares slope of ln <x^2> against ln tau. The grid must span a decade.
double msd_exponent(const StableIndex& alpha, const std::vector<double>& tau_grid);

/// |int n(s, tau) ds - 1| over tau_grid, absolute metric.
VerifyReport verify_kernel_norm(const StableIndex& alpha, const std::vector<double>& tau_grid,
                                double tol);

/// |int P_a(x, tau) dx - 1| over tau_grid (x_moments), absolute metric.
VerifyReport verify_x_norm(const StableIndex& alpha, const std::vector<double>& tau_grid,
                           double tol);

}  // namespace levy
