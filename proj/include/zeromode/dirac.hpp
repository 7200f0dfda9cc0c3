#pragma once

// Zero-energy Dirac equation for a potential V(x) depending on x only:
//
//   (V - eps) psi_A - i (psi_B' + k_y psi_B) = 0
//   (V - eps) psi_B - i (psi_A' - k_y psi_A) = 0
//
// Bound momenta are located by shooting: integrate from both ends on the
// decaying channel, and find k_y where the two solutions become linearly
// dependent at the matching point. Periodic potentials are analysed through
// the one-period transfer matrix instead.

#include <complex>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "zeromode/potentials.hpp"

namespace zeromode::dirac {

struct Domain {
  double lo = -60.0;
  double hi = 60.0;
};

struct SolverOptions {
  Domain domain;
  std::size_t steps = 200000;
  double x_match = 0.0;
  /// Fixed to 0 everywhere in this project; carried for completeness.
  double energy = 0.0;
  std::size_t renormalize_every = 50;
};

/// Domain [-w, w] with w = 25 / kappa_min clipped to 60, where kappa_min is
/// the slowest predicted decay rate; 2e5 steps.
SolverOptions default_options(const PotentialSpec& spec);

struct SpinorState {
  std::vector<double> xs;
  std::vector<std::complex<double>> psi_a;
  std::vector<std::complex<double>> psi_b;
  double ky = 0.0;
  double energy = 0.0;
};

enum class Side { Left, Right };

/// Integrates across the whole domain starting on the decaying channel at
/// the chosen end. The result is scaled to unit max-norm.
SpinorState integrate_dirac(const PotentialSpec& spec, double ky, Side from,
                            const SolverOptions& options);

/// Im W(k_y), W = psi_A^L psi_B^R - psi_B^L psi_A^R at the matching point with
/// both solutions at unit norm there. Continuous in k_y; zero at bound states.
double matching_residual(const PotentialSpec& spec, double ky, const SolverOptions& options);

/// Left and right solutions spliced at the matching point (unit max-norm).
/// Only meaningful at a bound momentum.
SpinorState bound_state(const PotentialSpec& spec, double ky, const SolverOptions& options);

struct ScanOptions {
  double ky_lo = 0.05;
  double ky_hi = 2.0;
  std::size_t scan_points = 200;
  double ky_tolerance = 1e-8;
};

struct FoundMomentum {
  double ky = 0.0;
  /// Half-width of the final bisection bracket.
  double error = 0.0;
  double bracket_lo = 0.0;
  double bracket_hi = 0.0;
};

struct MonodromyResult {
  double ky = 0.0;
  double trace = 0.0;
  /// Imaginary part of tr T; zero up to rounding.
  double trace_imag = 0.0;
  bool allowed = false;
  bool band_edge = false;
};

struct ZeroModeReport {
  PotentialSpec spec;
  std::vector<double> ky_grid;
  /// Im W for shooting; |tr T| - 2 for periodic potentials.
  std::vector<double> residuals;
  /// Bound momenta (shooting) or band edges (periodic), ascending.
  std::vector<FoundMomentum> found;
  std::vector<double> predicted_ky;
  bool periodic = false;
  /// Periodic only: transfer-matrix trace at every predicted momentum.
  std::vector<MonodromyResult> predicted_checks;
  std::vector<std::string> warnings;

  /// True when every predicted momentum is confirmed: a found momentum
  /// within `tol` (shooting) or an allowed Bloch state (periodic).
  bool matched(double tol) const;
};

/// Scans k_y, brackets sign changes and bisects each to `ky_tolerance`.
/// Periodic specs are delegated to monodromy_trace.
ZeroModeReport find_zero_modes(const PotentialSpec& spec, const ScanOptions& scan,
                               const SolverOptions& options);

/// Max-abs residual of the decoupled second-order equations
/// [-d^2/dx^2 - V^2 -/+ i V' + k_y^2] psi_{1,2} = 0, psi_{1,2} = psi_A +/- psi_B,
/// by finite differences on the state's grid.
double schrodinger_form_check(const PotentialSpec& spec, double ky, const SpinorState& state);

/// Expected size of schrodinger_form_check for an exact solution: the
/// second-difference truncation plus rounding.
double schrodinger_truncation_estimate(const PotentialSpec& spec, const SpinorState& state);

/// Max-abs difference between the -k_y solution and the component swap of
/// the +k_y solution, after phase alignment.
double spin_flip_check(const PotentialSpec& spec, double ky, const SolverOptions& options);

struct PtReport {
  bool even = false;
  double evenness_violation = 0.0;
  /// max |V_j(-x) - conj V_j(x)| over j = 1, 2.
  double pt_violation = 0.0;
};

/// PT test of V_{1,2} = -V^2 -/+ i V' + k_y^2 on the grid points and their mirrors.
PtReport pt_symmetry_check(const PotentialSpec& spec, double ky, std::span<const double> grid);

/// Trace of the one-period transfer matrix. Throws ParameterError for
/// non-periodic specs.
MonodromyResult monodromy_trace(const PotentialSpec& spec, double ky, std::size_t steps = 20000);

/// Slope of log max(|psi_A|, |psi_B|) over the last decade of decay toward
/// the given end of the grid.
double decay_log_slope(const SpinorState& state, Side end);

}  // namespace zeromode::dirac
