#include "zeromode/potentials.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>
#include <utility>

#include "zeromode/errors.hpp"

namespace zeromode {

namespace {

constexpr std::array<std::pair<Family, std::string_view>, 7> kFamilyNames{{
    {Family::OneSoliton, "one-soliton"},
    {Family::TwoSoliton, "two-soliton"},
    {Family::NSoliton, "n-soliton"},
    {Family::PeriodicOneGap, "periodic-one-gap"},
    {Family::PeriodicCn, "periodic-cn"},
    {Family::CombinedOneSoliton, "combined"},
    {Family::Constant, "constant"},
}};

void require_positive(double v, const char* what) {
  if (!std::isfinite(v) || v <= 0.0) {
    throw ParameterError(std::string(what) + " must be positive, got " + std::to_string(v));
  }
}

// Two-soliton closed form evaluated at y = |x| >= 0 with every cosh scaled by
// e^{-2(eta1+eta2)y}, so nothing overflows. Returns {numerator, denominator}
// without the leading 4(eta1+eta2)/(eta1-eta2) factor.
std::pair<double, double> two_soliton_parts(const TwoSolitonParams& p, double y) {
  const double sum = p.eta1 + p.eta2;
  const double diff = p.eta2 - p.eta1;
  const auto scaled_cosh = [&](double k) {
    return std::exp((k - 2.0 * sum) * y) + std::exp(-(k + 2.0 * sum) * y);
  };
  const double ratio = sum / diff;
  const double coupling = 4.0 * p.eta1 * p.eta2 * p.eps1 * p.eps2 / (diff * diff);
  const double num = p.eps1 * p.eta1 * scaled_cosh(2.0 * p.eta2) +
                     p.eps2 * p.eta2 * scaled_cosh(2.0 * p.eta1);
  const double den = scaled_cosh(2.0 * sum) + 2.0 * coupling * std::exp(-2.0 * sum * y) +
                     ratio * ratio * scaled_cosh(2.0 * diff);
  return {num, den};
}

}  // namespace

std::string_view family_name(Family family) {
  for (const auto& [f, name] : kFamilyNames) {
    if (f == family) return name;
  }
  return "unknown";
}

Family family_from_name(std::string_view name) {
  for (const auto& [f, n] : kFamilyNames) {
    if (n == name) return f;
  }
  throw ParameterError("unknown potential family '" + std::string(name) + "'");
}

PeriodicOneGapParams PeriodicOneGapParams::make(double a, double b, double c) {
  if (!std::isfinite(a) || !std::isfinite(b) || !std::isfinite(c)) {
    throw ParameterError("one-gap parameters must be finite");
  }
  if (!(a > b && b >= c)) {
    throw ParameterError("one-gap parameters need a > b >= c, got a=" + std::to_string(a) +
                         " b=" + std::to_string(b) + " c=" + std::to_string(c));
  }
  const double scale_sq = (a - c) * (a + 2.0 * b + c);
  if (!(scale_sq > 0.0)) {
    throw ParameterError("one-gap: (a-c)(a+2b+c) must be positive for a real scale");
  }
  const double m_sq = (a - b) * (a + b + 2.0 * c) / scale_sq;
  if (!(m_sq >= 0.0 && m_sq <= 1.0 + 1e-15)) {
    throw ParameterError("one-gap: modulus^2 = " + std::to_string(m_sq) + " outside [0, 1]");
  }
  PeriodicOneGapParams p;
  p.a = a;
  p.b = b;
  p.c = c;
  p.modulus = elliptic::EllipticModulus(std::min(1.0, std::sqrt(m_sq)));
  p.eta = 0.5 * std::sqrt(scale_sq);
  return p;
}

double PeriodicCnParams::eta() const { return std::sqrt(a / (2.0 * modulus.value() * modulus.value() - 1.0)); }

double CombinedParams::gamma() const { return alpha / (2.0 * std::sqrt(beta)); }

double CombinedParams::cos_theta() const {
  return alpha / std::sqrt(alpha * alpha + 4.0 * eta * eta * beta);
}

double CombinedParams::sin_theta() const {
  return 2.0 * eta * std::sqrt(beta) / std::sqrt(alpha * alpha + 4.0 * eta * eta * beta);
}

PotentialSpec::PotentialSpec(FamilyParams params, std::vector<double> predicted,
                             std::optional<double> period)
    : params_(std::move(params)), predicted_ky_(std::move(predicted)), period_(period) {
  std::sort(predicted_ky_.begin(), predicted_ky_.end());
}

Family PotentialSpec::family() const noexcept { return static_cast<Family>(params_.index()); }

double PotentialSpec::family_value(double y) const {
  struct Visitor {
    double y;

    double operator()(const OneSolitonParams& p) const {
      return -2.0 * p.eta / std::cosh(2.0 * p.eta * y);
    }
    double operator()(const TwoSolitonParams& p) const {
      const auto [num, den] = two_soliton_parts(p, std::abs(y));
      if (!(den > 0.0)) throw EvaluationError("two-soliton denominator vanishes", y);
      return 4.0 * (p.eta1 + p.eta2) / (p.eta1 - p.eta2) * num / den;
    }
    double operator()(const NSolitonParams& p) const { return n_soliton_field(p, y, p.t); }
    double operator()(const PeriodicOneGapParams& p) const {
      const double s = elliptic::sn(p.eta * y, p.modulus);
      const double s2 = s * s;
      const double den = (p.a - p.b) * s2 + (p.a + 2.0 * p.b + p.c);
      if (den == 0.0) throw EvaluationError("one-gap denominator vanishes", y);
      return ((p.a - p.b) * (p.a + p.b + p.c) * s2 - p.a * (p.a + 2.0 * p.b + p.c)) / den;
    }
    double operator()(const PeriodicCnParams& p) const {
      const double eta = p.eta();
      return -p.modulus.value() * eta * elliptic::cn(eta * y, p.modulus);
    }
    double operator()(const CombinedParams& p) const {
      const double den = p.cos_theta() + std::cosh(2.0 * p.eta * y);
      if (!(den > 0.0)) throw EvaluationError("combined-soliton denominator vanishes", y);
      return -(2.0 * p.eta / std::sqrt(p.beta)) * p.sin_theta() / den;
    }
    double operator()(const ConstantParams& p) const { return p.value; }
  };
  return std::visit(Visitor{y}, params_);
}

double PotentialSpec::value(double x) const {
  if (!std::isfinite(x)) throw EvaluationError("potential evaluated at non-finite position", x);
  try {
    return sign_ * family_value(x - shift_);
  } catch (const EvaluationError& e) {
    // Report the caller's coordinate, not the shifted one.
    if (shift_ == 0.0) throw;
    throw EvaluationError(std::string(family_name(family())) + " evaluation failed", x);
  }
}

double PotentialSpec::dirac_value(double x) const {
  if (const auto* p = std::get_if<CombinedParams>(&params_)) {
    // The combined-equation field is -u for the profile u of value().
    return sign_ * (p->gamma() - std::sqrt(p->beta) * family_value(x - shift_));
  }
  return value(x);
}

double PotentialSpec::dirac_asymptote() const {
  if (const auto* p = std::get_if<CombinedParams>(&params_)) return sign_ * p->gamma();
  if (const auto* p = std::get_if<ConstantParams>(&params_)) return sign_ * p->value;
  return 0.0;
}

double PotentialSpec::max_eta() const {
  struct Visitor {
    double operator()(const OneSolitonParams& p) const { return p.eta; }
    double operator()(const TwoSolitonParams& p) const { return p.eta2; }
    double operator()(const NSolitonParams& p) const { return p.etas.back(); }
    double operator()(const PeriodicOneGapParams& p) const { return p.eta; }
    double operator()(const PeriodicCnParams& p) const { return p.eta(); }
    double operator()(const CombinedParams& p) const { return p.eta; }
    double operator()(const ConstantParams&) const { return 0.0; }
  };
  return std::visit(Visitor{}, params_);
}

PotentialSpec with_transform(PotentialSpec spec, double sign, double shift) {
  spec.sign_ *= sign;
  spec.shift_ += shift;
  return spec;
}

PotentialSpec PotentialSpec::negated() const { return with_transform(*this, -1.0, 0.0); }

PotentialSpec PotentialSpec::shifted(double dx) const {
  if (!std::isfinite(dx)) throw ParameterError("shift must be finite");
  return with_transform(*this, 1.0, dx);
}

PotentialSpec one_soliton(double eta) {
  require_positive(eta, "one-soliton eta");
  return PotentialSpec(OneSolitonParams{eta}, {eta}, std::nullopt);
}

PotentialSpec two_soliton(const TwoSolitonParams& p) {
  require_positive(p.eta1, "two-soliton eta1");
  require_positive(p.eta2, "two-soliton eta2");
  if (p.eta1 == p.eta2) throw ParameterError("two-soliton: eta1 == eta2 is singular");
  if (!(p.eta1 < p.eta2)) throw ParameterError("two-soliton: need eta1 < eta2");
  if (!std::isfinite(p.eps1) || !std::isfinite(p.eps2)) {
    throw ParameterError("two-soliton: eps1, eps2 must be finite");
  }
  // Coarse symmetric grid through x = 0 (where every cosh term is smallest).
  const double half_width = 20.0 / p.eta1;
  constexpr int kPoints = 401;
  for (int i = 0; i < kPoints; ++i) {
    const double x = -half_width + 2.0 * half_width * i / (kPoints - 1);
    const auto [num, den] = two_soliton_parts(p, std::abs(x));
    if (!(den > 0.0)) {
      throw EvaluationError("two-soliton denominator is not positive for eps1=" +
                                std::to_string(p.eps1) + ", eps2=" + std::to_string(p.eps2),
                            x);
    }
  }
  return PotentialSpec(p, {p.eta1, p.eta2}, std::nullopt);
}

PotentialSpec n_soliton(const NSolitonParams& p) {
  p.validate();
  return PotentialSpec(p, p.etas, std::nullopt);
}

PotentialSpec periodic_one_gap(const PeriodicOneGapParams& p) {
  // Re-derive so hand-built records cannot smuggle in inconsistent m or eta.
  PeriodicOneGapParams q = PeriodicOneGapParams::make(p.a, p.b, p.c);
  const double low = q.a + 2.0 * q.b + q.c;  // denominator at sn = 0
  const double high = 2.0 * q.a + q.b + q.c;  // denominator at sn^2 = 1
  if (!(low > 0.0 && high > 0.0) && !(low < 0.0 && high < 0.0)) {
    // The denominator changes sign where sn^2 = -low / (a - b); locate it.
    const double quarter = q.modulus.value() < 1.0 ? elliptic::complete_K(q.modulus) : 20.0;
    double x_bad = 0.0;
    for (int i = 0; i <= 2000; ++i) {
      const double x = quarter / q.eta * i / 2000.0;
      const double s = elliptic::sn(q.eta * x, q.modulus);
      if ((q.a - q.b) * s * s + low >= 0.0) {
        x_bad = x;
        break;
      }
    }
    throw EvaluationError("one-gap denominator changes sign over the period", x_bad);
  }
  std::optional<double> period;
  if (q.modulus.value() < 1.0) period = 2.0 * elliptic::complete_K(q.modulus) / q.eta;
  const double eta = q.eta;
  return PotentialSpec(std::move(q), {eta}, period);
}

PotentialSpec periodic_cn(elliptic::EllipticModulus m, double a) {
  require_positive(a, "cn amplitude a");
  if (!(2.0 * m.value() * m.value() - 1.0 > 0.0)) {
    throw ParameterError("cn potential needs modulus > 1/sqrt(2) for a real eta, got " +
                         std::to_string(m.value()));
  }
  PeriodicCnParams p{m, a};
  std::optional<double> period;
  if (m.value() < 1.0) period = 4.0 * elliptic::complete_K(m) / p.eta();
  const double eta = p.eta();
  return PotentialSpec(p, {eta}, period);
}

PotentialSpec combined_one_soliton(const CombinedParams& p) {
  if (!std::isfinite(p.alpha)) throw ParameterError("combined: alpha must be finite");
  require_positive(p.beta, "combined beta");
  require_positive(p.eta, "combined eta");
  const double gamma = p.gamma();
  return PotentialSpec(p, {std::sqrt(p.eta * p.eta + gamma * gamma)}, std::nullopt);
}

PotentialSpec constant_potential(double value, std::optional<double> period) {
  if (!std::isfinite(value)) throw ParameterError("constant potential must be finite");
  if (period) require_positive(*period, "constant potential period");
  return PotentialSpec(ConstantParams{value, period}, {}, period);
}

std::vector<double> evaluate(const PotentialSpec& spec, std::span<const double> xs) {
  std::vector<double> out;
  out.reserve(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (!std::isfinite(xs[i])) throw EvaluationError("grid contains a non-finite position", xs[i]);
    if (i > 0 && !(xs[i] > xs[i - 1])) {
      throw EvaluationError("grid must be strictly increasing", xs[i]);
    }
    out.push_back(spec.value(xs[i]));
  }
  return out;
}

}  // namespace zeromode
