#pragma once

// Finite-difference residuals of the evolution equations the potentials are
// supposed to solve:
//
//   mKdV             u_t + 6 u^2 u_x + u_xxx = 0
//   combined         u_t + 6 alpha u u_x + 6 beta u^2 u_x + u_xxx = 0
//   stationary form  -v f' + 6 f^2 f' + f''' = 0   for u = f(x - v t)
//
// u_x and u_xxx use 5-point centred stencils on the grid, u_t a centred
// difference with dt = h^2. Each report also repeats the computation at h/2
// on the same sample points and reports the observed order.

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "zeromode/potentials.hpp"

namespace zeromode::verify {

struct SpatialGrid {
  double x_lo = -15.0;
  double x_hi = 15.0;
  std::size_t n = 6001;

  double spacing() const;
};

struct ResidualReport {
  double grid_h = 0.0;
  std::vector<double> time_samples;
  /// max |r| over the grid and all time samples.
  double residual_norm = 0.0;
  /// Same quantity at h/2, sampled at the original grid points.
  std::optional<double> residual_half_h;
  /// log2(residual_norm / residual_half_h).
  std::optional<double> convergence_order;
  /// Travelling-wave speed fitted at the reference time, when applicable.
  std::optional<double> fitted_speed;
};

/// u(x, t).
using Field = std::function<double(double, double)>;

/// Residual of the determinant N-soliton with its d_n(t) law.
ResidualReport mkdv_residual(const NSolitonParams& p, const SpatialGrid& grid, std::span<const double> times);

/// Residual of an arbitrary field. `max_eta` is the sharpest inverse length in
/// the field, used for the grid resolution check (pass 0 for u = 0).
ResidualReport mkdv_residual(const Field& u, double max_eta, const SpatialGrid& grid,
                             std::span<const double> times);

/// Residual of the combined-equation one-soliton, taken as the travelling wave
/// -u(x - v t) of the profile u with v fitted at times[0].
ResidualReport combined_residual(const CombinedParams& p, const SpatialGrid& grid, std::span<const double> times);

/// Combined-equation residual of an arbitrary field, no speed fitting.
ResidualReport combined_residual(const Field& u, double alpha, double beta, double max_eta,
                                 const SpatialGrid& grid, std::span<const double> times);

/// Stationary travelling-wave residual of a periodic (or constant) profile
/// with a fitted speed. Throws ParameterError for other families.
ResidualReport stationary_elliptic_residual(const PotentialSpec& spec, const SpatialGrid& grid);

/// dV/dx from sn/cn/dn derivative identities, for the periodic families.
std::optional<double> analytic_slope(const PotentialSpec& spec, double x);

/// max |5-point difference - analytic_slope| over the grid.
double slope_cross_check(const PotentialSpec& spec, const SpatialGrid& grid);

}  // namespace zeromode::verify
