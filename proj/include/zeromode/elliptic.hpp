#pragma once

// Jacobi elliptic functions sn, cn, dn and the complete elliptic integral of
// the first kind. The second argument is always the MODULUS m (not the
// parameter m^2), so sn(x, 0) = sin x and sn(x, 1) = tanh x.

namespace zeromode::elliptic {

/// Elliptic modulus, 0 <= m <= 1.
class EllipticModulus {
 public:
  /// Throws ParameterError when m is not finite or lies outside [0, 1].
  explicit EllipticModulus(double m);

  double value() const noexcept { return m_; }
  /// Complementary modulus sqrt(1 - m^2), computed without cancellation.
  double complementary() const noexcept;

 private:
  double m_;
};

struct JacobiTriple {
  double sn;
  double cn;
  double dn;
};

/// All three functions at once; they share one AGM sequence.
JacobiTriple jacobi(double x, EllipticModulus m);

double sn(double x, EllipticModulus m);
double cn(double x, EllipticModulus m);
double dn(double x, EllipticModulus m);

/// K(m) = integral_0^{pi/2} dtheta / sqrt(1 - m^2 sin^2 theta), via the AGM.
/// Throws DomainError at m = 1 where K diverges.
double complete_K(EllipticModulus m);

}  // namespace zeromode::elliptic
