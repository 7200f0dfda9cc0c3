#pragma once

// Electrostatic potentials built from mKdV and combined KdV-mKdV solutions.
//
// Units are dimensionless throughout (hbar = v_F = 1), so the potential V and
// the energy epsilon are inverse lengths, as is the transverse momentum k_y.
// Every potential carries the momenta at which it is predicted to host a
// zero-energy state.

#include <complex>
#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <variant>
#include <vector>

#include "zeromode/elliptic.hpp"

namespace zeromode {

enum class Family {
  OneSoliton,
  TwoSoliton,
  NSoliton,
  PeriodicOneGap,
  PeriodicCn,
  CombinedOneSoliton,
  Constant,
};

/// Stable external name ("one-soliton", "two-soliton", "n-soliton",
/// "periodic-one-gap", "periodic-cn", "combined", "constant").
std::string_view family_name(Family family);
/// Inverse of family_name; throws ParameterError for unknown names.
Family family_from_name(std::string_view name);

struct OneSolitonParams {
  double eta = 0.5;
};

/// Parameters of the closed-form even two-soliton family.
/// Requires 0 < eta1 < eta2.
struct TwoSolitonParams {
  double eta1 = 0.5;
  double eta2 = 1.5;
  double eps1 = 1.0;
  double eps2 = 1.0;
};

/// Input to the determinant (inverse-scattering) N-soliton formula.
/// `etas` strictly increasing and positive; `d0s` nonzero, same length.
struct NSolitonParams {
  std::vector<double> etas;
  std::vector<double> d0s;
  double t = 0.0;

  /// Norming constants d_n(0) = 2 eta_n prod_{m != n} |(eta_n + eta_m)/(eta_n - eta_m)|,
  /// which centre the solution at x = 0 (and make it even for N <= 2) at t = 0.
  static NSolitonParams centered(std::vector<double> etas, double t = 0.0);

  /// Throws ParameterError if the invariants above do not hold.
  void validate() const;

  /// d_n(t) = d_n(0) exp(8 eta_n^3 t).
  double norming(std::size_t n, double time) const;
};

/// One-gap periodic mKdV solution, a > b >= c. Construct via make().
struct PeriodicOneGapParams {
  double a = 3.0;
  double b = 2.0;
  double c = 1.0;
  elliptic::EllipticModulus modulus{0.0};
  double eta = 0.0;

  /// Derives the modulus m = sqrt[(a-b)(a+b+2c) / ((a-c)(a+2b+c))] and the
  /// scale eta = sqrt[(a-c)(a+2b+c)] / 2; rejects triples where either is
  /// not real or m falls outside [0, 1].
  static PeriodicOneGapParams make(double a, double b, double c);
};

/// cn-type periodic solution, V = -m eta cn(eta x, m), eta = sqrt(a / (2m^2 - 1)).
struct PeriodicCnParams {
  elliptic::EllipticModulus modulus{1.0};
  double a = 1.0;

  double eta() const;
};

/// One-soliton of the combined KdV-mKdV equation, beta > 0, eta > 0.
struct CombinedParams {
  double alpha = 1.0;
  double beta = 1.0;
  double eta = 2.0;

  /// gamma = alpha / (2 sqrt(beta)).
  double gamma() const;
  /// cos(theta) = alpha (alpha^2 + 4 eta^2 beta)^{-1/2}.
  double cos_theta() const;
  double sin_theta() const;
};

struct ConstantParams {
  double value = 0.0;
  std::optional<double> period;
};

using FamilyParams = std::variant<OneSolitonParams, TwoSolitonParams, NSolitonParams,
                                  PeriodicOneGapParams, PeriodicCnParams, CombinedParams,
                                  ConstantParams>;

/// An immutable, evaluable potential together with its predicted zero-mode
/// momenta. Built by the factory functions below.
class PotentialSpec {
 public:
  Family family() const noexcept;
  const FamilyParams& params() const noexcept { return params_; }
  /// Ascending, strictly positive.
  const std::vector<double>& predicted_ky() const noexcept { return predicted_ky_; }
  bool periodic() const noexcept { return period_.has_value(); }
  std::optional<double> period() const noexcept { return period_; }

  /// The potential profile V(x) (the soliton field at the stored time).
  /// Throws EvaluationError with the offending x.
  double value(double x) const;

  /// The potential entering the Dirac equation. Identical to value() except
  /// for the combined family, where V_D = gamma - sqrt(beta) u(x) (see README).
  double dirac_value(double x) const;

  /// Limit of dirac_value at |x| -> infinity for non-periodic families.
  double dirac_asymptote() const;

  /// Largest eta-like inverse length in the parameters; 0 for constants.
  double max_eta() const;

  /// Overall sign and translation applied on top of the family formula:
  /// value(x) = sign * V_family(x - shift).
  double sign() const noexcept { return sign_; }
  double shift() const noexcept { return shift_; }

  PotentialSpec negated() const;
  PotentialSpec shifted(double dx) const;

 private:
  friend PotentialSpec one_soliton(double eta);
  friend PotentialSpec two_soliton(const TwoSolitonParams& p);
  friend PotentialSpec n_soliton(const NSolitonParams& p);
  friend PotentialSpec periodic_one_gap(const PeriodicOneGapParams& p);
  friend PotentialSpec periodic_cn(elliptic::EllipticModulus m, double a);
  friend PotentialSpec combined_one_soliton(const CombinedParams& p);
  friend PotentialSpec constant_potential(double value, std::optional<double> period);
  friend PotentialSpec with_transform(PotentialSpec spec, double sign, double shift);

  PotentialSpec(FamilyParams params, std::vector<double> predicted, std::optional<double> period);

  double family_value(double y) const;

  FamilyParams params_;
  std::vector<double> predicted_ky_;
  std::optional<double> period_;
  double sign_ = 1.0;
  double shift_ = 0.0;
};

/// V(x) = -2 eta sech(2 eta x); predicted k_y = eta.
PotentialSpec one_soliton(double eta);

/// Even two-soliton closed form; predicted k_y = {eta1, eta2}. The
/// denominator is checked for positivity at construction.
PotentialSpec two_soliton(const TwoSolitonParams& p);

/// Determinant N-soliton at time p.t; predicted k_y = etas.
PotentialSpec n_soliton(const NSolitonParams& p);

/// Periodic one-gap potential, period 2K(m)/eta; predicted k_y = eta.
PotentialSpec periodic_one_gap(const PeriodicOneGapParams& p);

/// Periodic cn potential, period 4K(m)/eta; predicted k_y = eta.
/// Requires m > 1/sqrt(2) and a > 0.
PotentialSpec periodic_cn(elliptic::EllipticModulus m, double a);

/// Combined KdV-mKdV one-soliton; predicted k_y = sqrt(eta^2 + gamma^2).
PotentialSpec combined_one_soliton(const CombinedParams& p);

/// V(x) = value everywhere; periodic with the given period when one is set.
/// Has no predicted momenta.
PotentialSpec constant_potential(double value, std::optional<double> period = std::nullopt);

/// Evaluates the profile on a finite, strictly increasing grid.
std::vector<double> evaluate(const PotentialSpec& spec, std::span<const double> xs);

/// N-soliton field u(x, t) from the determinant formula, differentiated with
/// Jacobi's formula (no numerical differencing).
double n_soliton_field(const NSolitonParams& p, double x, double t);

/// det(I + A(x, t)); exposed for tests. Overflows for very negative x.
std::complex<double> n_soliton_determinant(const NSolitonParams& p, double x, double t);

/// The closed-form two-soliton coincides with the determinant formula when
/// eps1, eps2 are each +1 or -1; returns the matching d_n(0), else nullopt.
std::optional<NSolitonParams> two_soliton_as_n_soliton(const TwoSolitonParams& p);

}  // namespace zeromode
