#pragma once

// Levy2 transform
//   L_a[f](x) = int_0^inf kappa_a(t, x) f(t) dt,  kappa_a(t, x) = t^-1/a g_a(x t^-1/a),
// the composition g_ab = L_a[g_b] built on it, and tabulation / caching of
// the composed densities.

#include <filesystem>
#include <functional>
#include <optional>
#include <utility>

#include "levy/densities.hpp"
#include "levy/quad.hpp"

namespace levy {

struct TransformRequest {
  DensityHandle kernel;  // g_a
  std::function<double(double)> operand;
  /// Defaults to levy2_default_plan(kernel, x) when absent.
  std::optional<QuadPlan> plan;
};

struct Levy2Result {
  double value = 0.0;
  double est_error = 0.0;
  bool converged = false;
};

/// Plan used for the t-integral at x: split where x t^-1/a sits at the mode of
/// g_a, relative tolerance 1e-11, no absolute floor to speak of.
QuadPlan levy2_default_plan(const DensityHandle& kernel, double x);

/// int kappa_a(t, x) f(t) dt. Non-convergence is flagged, not thrown.
Levy2Result levy2_apply(const TransformRequest& req, double x);

enum class Orientation {
  Auto,       // the larger index becomes the kernel when both have closed forms
  AsWritten,  // g_alpha is the kernel, beta_density the operand
};

struct ComposeOptions {
  Orientation orientation = Orientation::Auto;
  /// Tabulate the result instead of returning a live (one integral per call)
  /// handle.
  bool tabulate = false;
};

/// g_{alpha beta} = L_alpha[g_beta]. The live handle throws QuadError at any x
/// where the integral does not converge.
DensityHandle compose(const StableIndex& alpha, const DensityHandle& beta_density,
                      const ComposeOptions& options = {});

/// g_{alpha^p}: p - 1 successive compositions. Every intermediate is tabulated
/// before it becomes an operand; the last stage is live unless `tabulate_last`.
/// p > 4 needs allow_deep, since interpolation error compounds per stage.
DensityHandle power_chain(const StableIndex& alpha, int p, bool allow_deep = false,
                          bool tabulate_last = false);

struct TabulateOptions {
  int nodes = 128;
  /// Range in u = ln x. Default: [ln min(1e-3, x0), ln 1e4], where
  /// c x0^-rho = 60 in the small-x law.
  std::optional<std::pair<double, double>> u_range;
  int checkpoints = 16;
  double checkpoint_tol = 1e-7;
};

/// Chebyshev-Lobatto fit of ln g against ln x. Throws TabulationError naming
/// the node when an evaluation fails, and when an off-node checkpoint or the
/// seam to the tail series misses its bound.
ChebLogInterpolant tabulate(const DensityHandle& d, const TabulateOptions& options = {});

/// Tabulated handle with the same chain as `d` (a copy if already tabulated).
DensityHandle tabulated(const DensityHandle& d, const TabulateOptions& options = {});

/// Writes a tabulated handle as JSON, atomically (temp file + rename).
void cache_save(const DensityHandle& d, const std::filesystem::path& path);
/// Throws CacheError on version mismatch, checksum failure or malformed
/// content; never returns a partial handle.
DensityHandle cache_load(const std::filesystem::path& path);

}  // namespace levy
