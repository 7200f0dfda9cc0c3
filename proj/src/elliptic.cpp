#include "zeromode/elliptic.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <string>

#include "zeromode/errors.hpp"

namespace zeromode::elliptic {

namespace {

constexpr int kMaxAgmSteps = 16;
constexpr double kAgmTolerance = 1e-15;
// Above this modulus the AGM is replaced by the expansion about m = 1.
constexpr double kNearOne = 1.0 - 1e-8;

void require_finite(double x) {
  if (!std::isfinite(x)) {
    throw DomainError("elliptic function argument is not finite: " + std::to_string(x));
  }
}

double agm(double a, double b) {
  for (int i = 0; i < 64 && std::abs(a - b) > kAgmTolerance * a; ++i) {
    const double next_a = 0.5 * (a + b);
    b = std::sqrt(a * b);
    a = next_a;
  }
  return 0.5 * (a + b);
}

// Descending Landen transformation (A&S 16.4).
JacobiTriple jacobi_agm(double x, double m, double mc) {
  std::array<double, kMaxAgmSteps + 1> a{};
  std::array<double, kMaxAgmSteps + 1> c{};
  a[0] = 1.0;
  c[0] = m;
  double b = mc;
  int n = 0;
  while (n < kMaxAgmSteps && std::abs(c[n]) > kAgmTolerance * a[n]) {
    a[n + 1] = 0.5 * (a[n] + b);
    c[n + 1] = 0.5 * (a[n] - b);
    b = std::sqrt(a[n] * b);
    ++n;
  }
  if (n == 0) {
    return {std::sin(x), std::cos(x), 1.0};
  }
  double phi = std::ldexp(a[n] * x, n);
  for (int j = n; j >= 1; --j) {
    phi = 0.5 * (phi + std::asin(c[j] / a[j] * std::sin(phi)));
  }
  const double s = std::sin(phi);
  const double co = std::cos(phi);
  // dn^2 = mc^2 + m^2 cn^2 avoids the cancellation in 1 - m^2 sn^2.
  return {s, co, std::sqrt(mc * mc + m * m * co * co)};
}

// First-order expansion in mc^2 = 1 - m^2 about the hyperbolic limit
// (A&S 16.15). Valid for |u| <= K/2 where mc^2 e^{2|u|} stays small.
JacobiTriple jacobi_hyperbolic(double u, double mc2) {
  const double t = std::tanh(u);
  const double s = 1.0 / std::cosh(u);
  const double q = 0.25 * mc2;
  const double sh = std::sinh(u);
  return {t + q * (t - u * s * s), s - q * t * (sh - u * s), s + q * t * (sh + u * s)};
}

JacobiTriple jacobi_near_one(double x, double m, double mc) {
  const double quarter = std::numbers::pi / (2.0 * agm(1.0, mc));
  const double period = 4.0 * quarter;
  double r = std::fmod(x, period);
  if (r > 2.0 * quarter) r -= period;
  if (r <= -2.0 * quarter) r += period;

  const double sign = r < 0.0 ? -1.0 : 1.0;
  double v = std::abs(r);
  double cn_sign = 1.0;
  if (v > quarter) {
    v = 2.0 * quarter - v;
    cn_sign = -1.0;
  }
  const double mc2 = (1.0 - m) * (1.0 + m);
  JacobiTriple out;
  if (v > 0.5 * quarter) {
    // Reflect about the quarter period: sn(K - q) = cn q / dn q, etc.
    const JacobiTriple inner = jacobi_hyperbolic(quarter - v, mc2);
    out = {inner.cn / inner.dn, mc * inner.sn / inner.dn, mc / inner.dn};
  } else {
    out = jacobi_hyperbolic(v, mc2);
  }
  return {sign * out.sn, cn_sign * out.cn, out.dn};
}

}  // namespace

EllipticModulus::EllipticModulus(double m) : m_(m) {
  if (!std::isfinite(m) || m < 0.0 || m > 1.0) {
    throw ParameterError("elliptic modulus must lie in [0, 1], got " + std::to_string(m));
  }
}

double EllipticModulus::complementary() const noexcept { return std::sqrt((1.0 - m_) * (1.0 + m_)); }

JacobiTriple jacobi(double x, EllipticModulus m) {
  require_finite(x);
  const double k = m.value();
  if (k == 1.0) {
    const double s = 1.0 / std::cosh(x);
    return {std::tanh(x), s, s};
  }
  if (k > kNearOne) {
    return jacobi_near_one(x, k, m.complementary());
  }
  return jacobi_agm(x, k, m.complementary());
}

double sn(double x, EllipticModulus m) { return jacobi(x, m).sn; }
double cn(double x, EllipticModulus m) { return jacobi(x, m).cn; }
double dn(double x, EllipticModulus m) { return jacobi(x, m).dn; }

double complete_K(EllipticModulus m) {
  if (m.value() == 1.0) {
    throw DomainError("complete elliptic integral K diverges at modulus 1");
  }
  return std::numbers::pi / (2.0 * agm(1.0, m.complementary()));
}

}  // namespace zeromode::elliptic
