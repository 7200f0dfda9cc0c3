#include <cmath>
#include <complex>
#include <string>
#include <utility>
#include <vector>

#include "zeromode/errors.hpp"
#include "zeromode/potentials.hpp"

namespace zeromode {

namespace {

using cplx = std::complex<double>;

// Dense row-major complex matrix with in-place LU (partial pivoting).
// N is the soliton count, so everything here is tiny.
class SmallLu {
 public:
  SmallLu(std::vector<cplx> m, std::size_t n) : lu_(std::move(m)), perm_(n), n_(n) {
    for (std::size_t i = 0; i < n_; ++i) perm_[i] = i;
    for (std::size_t k = 0; k < n_; ++k) {
      std::size_t pivot = k;
      for (std::size_t i = k + 1; i < n_; ++i) {
        if (std::abs(at(i, k)) > std::abs(at(pivot, k))) pivot = i;
      }
      if (pivot != k) {
        for (std::size_t j = 0; j < n_; ++j) std::swap(at(k, j), at(pivot, j));
        std::swap(perm_[k], perm_[pivot]);
        parity_ = -parity_;
      }
      const cplx diag = at(k, k);
      if (diag == cplx{}) {
        singular_ = true;
        return;
      }
      for (std::size_t i = k + 1; i < n_; ++i) {
        const cplx f = at(i, k) / diag;
        at(i, k) = f;
        for (std::size_t j = k + 1; j < n_; ++j) at(i, j) -= f * at(k, j);
      }
    }
  }

  bool singular() const { return singular_; }

  cplx determinant() const {
    if (singular_) return {};
    cplx det{static_cast<double>(parity_), 0.0};
    for (std::size_t k = 0; k < n_; ++k) det *= lu_[k * n_ + k];
    return det;
  }

  // Column j of the inverse.
  std::vector<cplx> inverse_column(std::size_t j) const {
    std::vector<cplx> x(n_);
    for (std::size_t i = 0; i < n_; ++i) x[i] = perm_[i] == j ? cplx{1.0} : cplx{};
    for (std::size_t i = 0; i < n_; ++i) {
      for (std::size_t k = 0; k < i; ++k) x[i] -= lu_[i * n_ + k] * x[k];
    }
    for (std::size_t i = n_; i-- > 0;) {
      for (std::size_t k = i + 1; k < n_; ++k) x[i] -= lu_[i * n_ + k] * x[k];
      x[i] /= lu_[i * n_ + i];
    }
    return x;
  }

 private:
  cplx& at(std::size_t i, std::size_t j) { return lu_[i * n_ + j]; }

  std::vector<cplx> lu_;
  std::vector<std::size_t> perm_;
  std::size_t n_;
  int parity_ = 1;
  bool singular_ = false;
};

// I + A with A_mn = -d_n/(zeta_n + zeta_m) exp[i(zeta_n + zeta_m)x], zeta = i eta.
// Substituting zeta gives A_mn = i d_n exp[-(eta_n + eta_m)x] / (eta_n + eta_m).
std::vector<cplx> identity_plus_a(const NSolitonParams& p, double x, double t) {
  const std::size_t n = p.etas.size();
  std::vector<cplx> m(n * n);
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < n; ++c) {
      const double sum = p.etas[r] + p.etas[c];
      m[r * n + c] = cplx{0.0, p.norming(c, t) * std::exp(-sum * x) / sum};
      if (r == c) m[r * n + c] += 1.0;
    }
  }
  return m;
}

}  // namespace

NSolitonParams NSolitonParams::centered(std::vector<double> etas, double t) {
  NSolitonParams p;
  p.t = t;
  p.d0s.resize(etas.size());
  for (std::size_t n = 0; n < etas.size(); ++n) {
    double d = 2.0 * etas[n];
    for (std::size_t m = 0; m < etas.size(); ++m) {
      if (m != n) d *= std::abs((etas[n] + etas[m]) / (etas[n] - etas[m]));
    }
    p.d0s[n] = d;
  }
  p.etas = std::move(etas);
  p.validate();
  return p;
}

void NSolitonParams::validate() const {
  if (etas.empty()) throw ParameterError("N-soliton needs at least one eigenvalue (N = 0)");
  if (d0s.size() != etas.size()) {
    throw ParameterError("N-soliton: " + std::to_string(etas.size()) + " eigenvalues but " +
                         std::to_string(d0s.size()) + " norming constants");
  }
  for (std::size_t n = 0; n < etas.size(); ++n) {
    if (!std::isfinite(etas[n]) || etas[n] <= 0.0) {
      throw ParameterError("N-soliton: eta_" + std::to_string(n + 1) + " must be positive");
    }
    if (n > 0 && !(etas[n] > etas[n - 1])) {
      throw ParameterError("N-soliton: etas must be strictly increasing");
    }
    if (!std::isfinite(d0s[n]) || d0s[n] == 0.0) {
      throw ParameterError("N-soliton: d_" + std::to_string(n + 1) + "(0) must be nonzero");
    }
  }
  if (!std::isfinite(t)) throw ParameterError("N-soliton: time must be finite");
}

double NSolitonParams::norming(std::size_t n, double time) const {
  const double eta = etas[n];
  return d0s[n] * std::exp(8.0 * eta * eta * eta * time);
}

std::complex<double> n_soliton_determinant(const NSolitonParams& p, double x, double t) {
  p.validate();
  return SmallLu(identity_plus_a(p, x, t), p.etas.size()).determinant();
}

double n_soliton_field(const NSolitonParams& p, double x, double t) {
  p.validate();
  const std::size_t n = p.etas.size();
  // u = -2 d/dx arg det(I + A) = -2 Im d/dx ln det(I + A).
  double log_derivative_im = 0.0;
  if (x >= 0.0) {
    // Jacobi's formula: d ln det(I + A) = tr[(I + A)^{-1} A'], A'_mn = -(eta_m + eta_n) A_mn.
    std::vector<cplx> m = identity_plus_a(p, x, t);
    std::vector<cplx> a_prime(n * n);
    for (std::size_t r = 0; r < n; ++r) {
      for (std::size_t c = 0; c < n; ++c) {
        cplx a = m[r * n + c];
        if (r == c) a -= 1.0;
        a_prime[r * n + c] = -(p.etas[r] + p.etas[c]) * a;
      }
    }
    const SmallLu lu(std::move(m), n);
    if (lu.singular() || std::abs(lu.determinant()) == 0.0) {
      throw EvaluationError("N-soliton: Re and Im of det(I + A) both vanish", x);
    }
    // tr(inv A') = sum_{j,k} inv(j,k) A'(k,j)
    cplx trace{};
    for (std::size_t k = 0; k < n; ++k) {
      const std::vector<cplx> col = lu.inverse_column(k);  // inv(:, k)
      for (std::size_t j = 0; j < n; ++j) trace += col[j] * a_prime[k * n + j];
    }
    log_derivative_im = trace.imag();
  } else {
    // For x < 0 factor I + A = G (G^{-2} + i C D) G with G = diag(e^{-eta x}),
    // C_mn = 1/(eta_m + eta_n), D = diag(d). The det(G)^2 factor contributes a
    // real log-derivative, so only M = e^{2 eta x} + i C D matters.
    std::vector<cplx> m(n * n);
    for (std::size_t r = 0; r < n; ++r) {
      for (std::size_t c = 0; c < n; ++c) {
        m[r * n + c] = cplx{0.0, p.norming(c, t) / (p.etas[r] + p.etas[c])};
      }
      m[r * n + r] += std::exp(2.0 * p.etas[r] * x);
    }
    const SmallLu lu(std::move(m), n);
    if (lu.singular() || std::abs(lu.determinant()) == 0.0) {
      throw EvaluationError("N-soliton: Re and Im of det(I + A) both vanish", x);
    }
    for (std::size_t k = 0; k < n; ++k) {
      const double weight = 2.0 * p.etas[k] * std::exp(2.0 * p.etas[k] * x);
      log_derivative_im += weight * lu.inverse_column(k)[k].imag();
    }
  }
  const double u = -2.0 * log_derivative_im;
  if (!std::isfinite(u)) throw EvaluationError("N-soliton: non-finite field", x);
  return u;
}

std::optional<NSolitonParams> two_soliton_as_n_soliton(const TwoSolitonParams& p) {
  const auto unit = [](double e) { return e == 1.0 || e == -1.0; };
  if (!unit(p.eps1) || !unit(p.eps2)) return std::nullopt;
  const double ratio = (p.eta1 + p.eta2) / (p.eta2 - p.eta1);
  NSolitonParams out;
  out.etas = {p.eta1, p.eta2};
  out.d0s = {-p.eps1 * 2.0 * p.eta1 * ratio, -p.eps2 * 2.0 * p.eta2 * ratio};
  out.validate();
  return out;
}

}  // namespace zeromode
