#include "zeromode/dirac.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <sstream>
#include <thread>

#include "zeromode/errors.hpp"

namespace zeromode::dirac {

namespace {

using cplx = std::complex<double>;
constexpr cplx kI{0.0, 1.0};

constexpr double kBoundaryTolerance = 1e-8;
constexpr double kTraceSlack = 1e-6;
constexpr double kMatchReportTolerance = 1e-3;

struct Spinor {
  cplx a;
  cplx b;
};

Spinor operator+(Spinor s, Spinor t) { return {s.a + t.a, s.b + t.b}; }
Spinor operator*(double f, Spinor s) { return {f * s.a, f * s.b}; }

// psi_A' = k psi_A - i V psi_B,  psi_B' = -i V psi_A - k psi_B   (V already shifted by eps)
Spinor rhs(double k, double v, Spinor s) { return {k * s.a - kI * v * s.b, -kI * v * s.a - k * s.b}; }

Spinor rk4(double k, double h, double v0, double v_mid, double v1, Spinor s) {
  const Spinor k1 = rhs(k, v0, s);
  const Spinor k2 = rhs(k, v_mid, s + (0.5 * h) * k1);
  const Spinor k3 = rhs(k, v_mid, s + (0.5 * h) * k2);
  const Spinor k4 = rhs(k, v1, s + h * k3);
  return s + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

double max_norm(Spinor s) { return std::max(std::abs(s.a), std::abs(s.b)); }

Spinor unit(Spinor s) {
  const double n = std::sqrt(std::norm(s.a) + std::norm(s.b));
  return {s.a / n, s.b / n};
}

// Eigenvector of the constant-background system that decays toward the
// starting end. Written with psi_A real and psi_B imaginary so that the whole
// integration keeps that structure.
Spinor decaying_channel(double k, double v_inf, Side from) {
  const double lam_sq = k * k - v_inf * v_inf;
  if (!(lam_sq > 0.0)) {
    // No decaying channel (periodic potentials only); use the free one.
    if (from == Side::Left) return k > 0.0 ? Spinor{1.0, 0.0} : Spinor{0.0, kI};
    return k > 0.0 ? Spinor{0.0, -kI} : Spinor{1.0, 0.0};
  }
  const double lam = std::sqrt(lam_sq);
  Spinor s;
  if (from == Side::Left) {
    s = k > 0.0 ? Spinor{k + lam, -kI * v_inf} : Spinor{v_inf, -kI * (k - lam)};
  } else {
    s = k > 0.0 ? Spinor{v_inf, -kI * (k + lam)} : Spinor{lam - k, kI * v_inf};
  }
  return unit(s);
}

void require_ky(double ky) {
  if (!std::isfinite(ky) || ky == 0.0) {
    throw ParameterError("k_y must be finite and nonzero (k_y = 0 is excluded)");
  }
}

struct Track {
  std::vector<Spinor> values;
  std::vector<double> logs;
};

// Potential sampled on the half-step lattice of one solver configuration,
// shared by every k_y of a scan.
class Shooter {
 public:
  Shooter(const PotentialSpec& spec, const SolverOptions& options)
      : lo_(options.domain.lo),
        steps_(options.steps),
        renorm_(std::max<std::size_t>(1, options.renormalize_every)),
        energy_(options.energy),
        periodic_(spec.periodic()) {
    if (!(options.domain.hi > options.domain.lo) || !std::isfinite(options.domain.lo) ||
        !std::isfinite(options.domain.hi)) {
      throw ParameterError("solver domain must be a finite interval with lo < hi");
    }
    if (steps_ < 4) throw ParameterError("solver needs at least 4 steps");
    h_ = (options.domain.hi - options.domain.lo) / static_cast<double>(steps_);
    samples_.resize(2 * steps_ + 1);
    for (std::size_t j = 0; j < samples_.size(); ++j) {
      samples_[j] = spec.dirac_value(lo_ + 0.5 * h_ * static_cast<double>(j)) - energy_;
    }
    if (!periodic_) {
      const double v_inf = spec.dirac_asymptote() - energy_;
      for (const double edge : {samples_.front(), samples_.back()}) {
        if (std::abs(edge - v_inf) > kBoundaryTolerance) {
          std::ostringstream msg;
          msg << "solver domain [" << options.domain.lo << ", " << options.domain.hi
              << "] is too narrow: potential differs from its asymptote by " << std::abs(edge - v_inf)
              << " at the boundary";
          throw ParameterError(msg.str());
        }
      }
      left_inf_ = right_inf_ = v_inf;
    } else {
      left_inf_ = samples_.front();
      right_inf_ = samples_.back();
    }
    const double raw = std::round((options.x_match - lo_) / h_);
    match_ = static_cast<std::size_t>(std::clamp(raw, 1.0, static_cast<double>(steps_ - 1)));
  }

  std::size_t steps() const { return steps_; }
  std::size_t match_node() const { return match_; }
  double x(std::size_t node) const { return lo_ + h_ * static_cast<double>(node); }
  double spacing() const { return h_; }
  bool periodic() const { return periodic_; }
  double asymptote(Side side) const { return side == Side::Left ? left_inf_ : right_inf_; }

  void require_channel(double k) const {
    if (periodic_) return;
    const double v = std::max(std::abs(left_inf_), std::abs(right_inf_));
    if (!(k * k > v * v)) {
      std::ostringstream msg;
      msg << "|k_y| = " << std::abs(k) << " does not exceed the asymptotic |V - eps| = " << v
          << ": no decaying channel";
      throw ParameterError(msg.str());
    }
  }

  // Integrates from `from` up to node `stop`; returns the spinor at `stop`
  // (renormalized) and the accumulated log-scale.
  Spinor run(double k, Side from, std::size_t stop, double& log_scale, Track* rec) const {
    Spinor s = decaying_channel(k, asymptote(from), from);
    log_scale = 0.0;
    const std::size_t start = from == Side::Left ? 0 : steps_;
    const std::size_t count = from == Side::Left ? stop - start : start - stop;
    auto record = [&](std::size_t node) {
      if (rec) {
        rec->values[node] = s;
        rec->logs[node] = log_scale;
      }
    };
    record(start);
    for (std::size_t n = 0; n < count; ++n) {
      if (from == Side::Left) {
        const std::size_t i = start + n;
        s = rk4(k, h_, samples_[2 * i], samples_[2 * i + 1], samples_[2 * i + 2], s);
        if ((n + 1) % renorm_ == 0 || n + 1 == count) renormalize(s, log_scale);
        record(i + 1);
      } else {
        const std::size_t i = start - n;
        s = rk4(k, -h_, samples_[2 * i], samples_[2 * i - 1], samples_[2 * i - 2], s);
        if ((n + 1) % renorm_ == 0 || n + 1 == count) renormalize(s, log_scale);
        record(i - 1);
      }
    }
    return s;
  }

  double residual(double k) const {
    double log_l = 0.0;
    double log_r = 0.0;
    const Spinor l = unit(run(k, Side::Left, match_, log_l, nullptr));
    const Spinor r = unit(run(k, Side::Right, match_, log_r, nullptr));
    return (l.a * r.b - l.b * r.a).imag();
  }

  Track track(double k, Side from, std::size_t stop) const {
    Track t;
    t.values.resize(steps_ + 1);
    t.logs.resize(steps_ + 1);
    double log_scale = 0.0;
    run(k, from, stop, log_scale, &t);
    return t;
  }

 private:
  static void renormalize(Spinor& s, double& log_scale) {
    const double m = max_norm(s);
    if (!std::isfinite(m) || !(m > 0.0)) {
      throw IntegrationError("Dirac integration overflowed despite renormalization");
    }
    s.a /= m;
    s.b /= m;
    log_scale += std::log(m);
  }

  double lo_;
  double h_ = 0.0;
  std::size_t steps_;
  std::size_t renorm_;
  double energy_;
  bool periodic_;
  double left_inf_ = 0.0;
  double right_inf_ = 0.0;
  std::size_t match_ = 0;
  std::vector<double> samples_;
};

// Converts (value, log-scale) pairs on nodes [first, last] into a state with
// unit max-norm.
SpinorState assemble(const Shooter& shooter, const std::vector<Spinor>& values,
                     const std::vector<double>& logs, double ky, double energy) {
  double top = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double m = max_norm(values[i]);
    if (m > 0.0) top = std::max(top, logs[i] + std::log(m));
  }
  SpinorState out;
  out.ky = ky;
  out.energy = energy;
  out.xs.resize(values.size());
  out.psi_a.resize(values.size());
  out.psi_b.resize(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double f = std::exp(logs[i] - top);
    out.xs[i] = shooter.x(i);
    out.psi_a[i] = f * values[i].a;
    out.psi_b[i] = f * values[i].b;
  }
  return out;
}

template <class F>
std::vector<double> parallel_map(const std::vector<double>& in, F f) {
  std::vector<double> out(in.size());
  const std::size_t workers =
      std::max<std::size_t>(1, std::min<std::size_t>(std::thread::hardware_concurrency(), in.size()));
  std::exception_ptr failure;
  std::mutex failure_mutex;
  {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        try {
          for (std::size_t i = w; i < in.size(); i += workers) out[i] = f(in[i]);
        } catch (...) {
          const std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
      });
    }
  }
  if (failure) std::rethrow_exception(failure);
  return out;
}

template <class F>
FoundMomentum bisect(double lo, double hi, double f_lo, double tol, F f) {
  while (0.5 * (hi - lo) > tol) {
    const double mid = 0.5 * (lo + hi);
    const double f_mid = f(mid);
    if (f_mid == 0.0) {
      lo = hi = mid;
      break;
    }
    if ((f_mid < 0.0) == (f_lo < 0.0)) {
      lo = mid;
      f_lo = f_mid;
    } else {
      hi = mid;
    }
  }
  return {0.5 * (lo + hi), 0.5 * (hi - lo), lo, hi};
}

std::vector<double> linspace(double lo, double hi, std::size_t n) {
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = n == 1 ? lo : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
  }
  return out;
}

// Sign changes of f over the grid, each bisected.
template <class F>
std::vector<FoundMomentum> roots(const std::vector<double>& grid, const std::vector<double>& values,
                                 double tol, F f) {
  std::vector<FoundMomentum> found;
  for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
    if (values[i] == 0.0) {
      found.push_back({grid[i], 0.0, grid[i], grid[i]});
      continue;
    }
    if ((values[i] < 0.0) != (values[i + 1] < 0.0) && values[i + 1] != 0.0) {
      found.push_back(bisect(grid[i], grid[i + 1], values[i], tol, f));
    }
  }
  if (!grid.empty() && values.back() == 0.0) found.push_back({grid.back(), 0.0, grid.back(), grid.back()});
  return found;
}

double v_prime(const PotentialSpec& spec, double x, double delta) {
  return (spec.dirac_value(x + delta) - spec.dirac_value(x - delta)) / (2.0 * delta);
}

}  // namespace

SolverOptions default_options(const PotentialSpec& spec) {
  SolverOptions opt;
  double half = 60.0;
  if (!spec.predicted_ky().empty() && !spec.periodic()) {
    const double k = spec.predicted_ky().front();
    const double v = spec.dirac_asymptote();
    const double kappa = std::sqrt(std::max(k * k - v * v, 0.0));
    if (kappa > 0.0) half = std::min(60.0, 25.0 / kappa);
  }
  opt.domain = {-half, half};
  return opt;
}

SpinorState integrate_dirac(const PotentialSpec& spec, double ky, Side from, const SolverOptions& options) {
  require_ky(ky);
  const Shooter shooter(spec, options);
  shooter.require_channel(ky);
  const std::size_t stop = from == Side::Left ? shooter.steps() : 0;
  const Track t = shooter.track(ky, from, stop);
  return assemble(shooter, t.values, t.logs, ky, options.energy);
}

double matching_residual(const PotentialSpec& spec, double ky, const SolverOptions& options) {
  require_ky(ky);
  const Shooter shooter(spec, options);
  shooter.require_channel(ky);
  return shooter.residual(ky);
}

SpinorState bound_state(const PotentialSpec& spec, double ky, const SolverOptions& options) {
  require_ky(ky);
  const Shooter shooter(spec, options);
  shooter.require_channel(ky);
  const std::size_t m = shooter.match_node();
  Track left = shooter.track(ky, Side::Left, m);
  const Track right = shooter.track(ky, Side::Right, m);

  // Scale the right solution onto the left one at the matching node.
  const Spinor l = left.values[m];
  const Spinor r = right.values[m];
  const cplx factor = (std::conj(r.a) * l.a + std::conj(r.b) * l.b) / (std::norm(r.a) + std::norm(r.b));
  const double log_offset = left.logs[m] - right.logs[m];
  for (std::size_t i = m + 1; i <= shooter.steps(); ++i) {
    left.values[i] = {factor * right.values[i].a, factor * right.values[i].b};
    left.logs[i] = right.logs[i] + log_offset;
  }
  return assemble(shooter, left.values, left.logs, ky, options.energy);
}

bool ZeroModeReport::matched(double tol) const {
  if (periodic) {
    return std::all_of(predicted_checks.begin(), predicted_checks.end(),
                       [](const MonodromyResult& r) { return r.allowed; });
  }
  return std::all_of(predicted_ky.begin(), predicted_ky.end(), [&](double k) {
    return std::any_of(found.begin(), found.end(),
                       [&](const FoundMomentum& f) { return std::abs(f.ky - k) <= tol; });
  });
}

ZeroModeReport find_zero_modes(const PotentialSpec& spec, const ScanOptions& scan, const SolverOptions& options) {
  if (!(scan.ky_lo > 0.0) || !(scan.ky_hi > scan.ky_lo) || !std::isfinite(scan.ky_hi)) {
    throw ParameterError("k_y scan range must be a positive interval");
  }
  if (scan.scan_points < 2) throw ParameterError("k_y scan needs at least 2 points");

  ZeroModeReport report{spec, {}, {}, {}, spec.predicted_ky(), spec.periodic(), {}, {}};

  if (spec.periodic()) {
    report.ky_grid = linspace(scan.ky_lo, scan.ky_hi, scan.scan_points);
    const auto excess = [&](double k) { return std::abs(monodromy_trace(spec, k).trace) - 2.0; };
    report.residuals = parallel_map(report.ky_grid, excess);
    report.found = roots(report.ky_grid, report.residuals, scan.ky_tolerance, excess);
    for (const double k : spec.predicted_ky()) report.predicted_checks.push_back(monodromy_trace(spec, k));
    return report;
  }

  const Shooter shooter(spec, options);
  double lo = scan.ky_lo;
  const double v_inf = std::abs(spec.dirac_asymptote() - options.energy);
  if (lo <= v_inf) {
    lo = v_inf * (1.0 + 1e-3) + 1e-6;
    std::ostringstream msg;
    msg << "scan start raised to " << lo << " (continuum threshold |V(inf)| = " << v_inf << ")";
    report.warnings.push_back(msg.str());
    if (!(lo < scan.ky_hi)) throw ParameterError("k_y scan range lies entirely below the continuum threshold");
  }
  report.ky_grid = linspace(lo, scan.ky_hi, scan.scan_points);
  const auto residual = [&](double k) { return shooter.residual(k); };
  report.residuals = parallel_map(report.ky_grid, residual);
  report.found = roots(report.ky_grid, report.residuals, scan.ky_tolerance, residual);

  for (const double k : spec.predicted_ky()) {
    if (k < lo || k > scan.ky_hi) continue;
    const bool hit = std::any_of(report.found.begin(), report.found.end(), [&](const FoundMomentum& f) {
      return std::abs(f.ky - k) <= kMatchReportTolerance;
    });
    if (!hit) {
      std::ostringstream msg;
      msg << "no bracket found within " << kMatchReportTolerance << " of predicted k_y = " << k
          << "; the scan may be too coarse";
      report.warnings.push_back(msg.str());
    }
  }
  return report;
}

double schrodinger_form_check(const PotentialSpec& spec, double ky, const SpinorState& state) {
  const std::size_t n = state.xs.size();
  if (n < 3) throw ParameterError("state too short for the second-order check");
  const double h = state.xs[1] - state.xs[0];
  double scale = 0.0;
  for (std::size_t i = 0; i < n; ++i) scale = std::max({scale, std::abs(state.psi_a[i]), std::abs(state.psi_b[i])});
  if (!(scale > 0.0)) return 0.0;

  double worst = 0.0;
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double x = state.xs[i];
    const double v = spec.dirac_value(x) - state.energy;
    const double dv = v_prime(spec, x, h);
    const auto psi1 = [&](std::size_t j) { return (state.psi_a[j] + state.psi_b[j]) / scale; };
    const auto psi2 = [&](std::size_t j) { return (state.psi_a[j] - state.psi_b[j]) / scale; };
    const cplx d2_1 = (psi1(i + 1) - 2.0 * psi1(i) + psi1(i - 1)) / (h * h);
    const cplx d2_2 = (psi2(i + 1) - 2.0 * psi2(i) + psi2(i - 1)) / (h * h);
    const cplx r1 = -d2_1 + (-v * v - kI * dv + ky * ky) * psi1(i);
    const cplx r2 = -d2_2 + (-v * v + kI * dv + ky * ky) * psi2(i);
    worst = std::max({worst, std::abs(r1), std::abs(r2)});
  }
  return worst;
}

double schrodinger_truncation_estimate(const PotentialSpec& spec, const SpinorState& state) {
  const std::size_t n = state.xs.size();
  if (n < 5) throw ParameterError("state too short for the truncation estimate");
  const double h = state.xs[1] - state.xs[0];
  double scale = 0.0;
  for (std::size_t i = 0; i < n; ++i) scale = std::max({scale, std::abs(state.psi_a[i]), std::abs(state.psi_b[i])});
  if (!(scale > 0.0)) return 0.0;
  double d4 = 0.0;
  double d3v = 0.0;
  for (std::size_t i = 2; i + 2 < n; ++i) {
    for (const double sgn : {1.0, -1.0}) {
      const auto p = [&](std::size_t j) { return (state.psi_a[j] + sgn * state.psi_b[j]) / scale; };
      d4 = std::max(d4, std::abs(p(i - 2) - 4.0 * p(i - 1) + 6.0 * p(i) - 4.0 * p(i + 1) + p(i + 2)) /
                            (h * h * h * h));
    }
    const double x = state.xs[i];
    const double v3 = (spec.dirac_value(x + 2 * h) - 2.0 * spec.dirac_value(x + h) +
                       2.0 * spec.dirac_value(x - h) - spec.dirac_value(x - 2 * h)) /
                      (2.0 * h * h * h);
    d3v = std::max(d3v, std::abs(v3));
  }
  constexpr double eps = std::numeric_limits<double>::epsilon();
  return h * h / 12.0 * d4 + h * h / 6.0 * d3v + 8.0 * eps / (h * h);
}

double spin_flip_check(const PotentialSpec& spec, double ky, const SolverOptions& options) {
  require_ky(ky);
  const SpinorState plus = integrate_dirac(spec, ky, Side::Left, options);
  const SpinorState minus = integrate_dirac(spec, -ky, Side::Left, options);
  // Least-squares phase between minus and swap(plus).
  cplx num{};
  double den = 0.0;
  for (std::size_t i = 0; i < plus.xs.size(); ++i) {
    num += std::conj(plus.psi_b[i]) * minus.psi_a[i] + std::conj(plus.psi_a[i]) * minus.psi_b[i];
    den += std::norm(plus.psi_a[i]) + std::norm(plus.psi_b[i]);
  }
  const cplx phase = num / den;
  double worst = 0.0;
  for (std::size_t i = 0; i < plus.xs.size(); ++i) {
    worst = std::max({worst, std::abs(minus.psi_a[i] - phase * plus.psi_b[i]),
                      std::abs(minus.psi_b[i] - phase * plus.psi_a[i])});
  }
  return worst;
}

PtReport pt_symmetry_check(const PotentialSpec& spec, double ky, std::span<const double> grid) {
  // Centred differences keep an even V's derivative exactly odd whatever the
  // step, so a wide step only reduces rounding noise in the comparison.
  constexpr double delta = 5e-2;
  PtReport report;
  double v_max = 0.0;
  for (const double x : grid) {
    const double v = spec.dirac_value(x);
    const double v_mirror = spec.dirac_value(-x);
    v_max = std::max(v_max, std::abs(v));
    report.evenness_violation = std::max(report.evenness_violation, std::abs(v_mirror - v));

    const double dv = v_prime(spec, x, delta);
    const double dv_mirror = v_prime(spec, -x, delta);
    for (const double sgn : {1.0, -1.0}) {
      const cplx here = -v * v - sgn * kI * dv + ky * ky;
      const cplx there = -v_mirror * v_mirror - sgn * kI * dv_mirror + ky * ky;
      report.pt_violation = std::max(report.pt_violation, std::abs(there - std::conj(here)));
    }
  }
  report.even = report.evenness_violation <= 1e-10 * std::max(1.0, v_max);
  return report;
}

MonodromyResult monodromy_trace(const PotentialSpec& spec, double ky, std::size_t steps) {
  require_ky(ky);
  if (!spec.periodic()) throw ParameterError("monodromy needs a periodic potential");
  if (steps < 4) throw ParameterError("monodromy needs at least 4 steps");
  const double period = *spec.period();
  const double h = period / static_cast<double>(steps);
  Spinor c1{1.0, 0.0};
  Spinor c2{0.0, 1.0};
  double v0 = spec.dirac_value(0.0);
  for (std::size_t i = 0; i < steps; ++i) {
    const double x = h * static_cast<double>(i);
    const double v_mid = spec.dirac_value(x + 0.5 * h);
    const double v1 = spec.dirac_value(h * static_cast<double>(i + 1));
    c1 = rk4(ky, h, v0, v_mid, v1, c1);
    c2 = rk4(ky, h, v0, v_mid, v1, c2);
    v0 = v1;
  }
  const cplx tr = c1.a + c2.b;
  if (!std::isfinite(tr.real())) throw IntegrationError("transfer matrix overflowed");
  MonodromyResult out;
  out.ky = ky;
  out.trace = tr.real();
  out.trace_imag = tr.imag();
  out.allowed = std::abs(out.trace) <= 2.0 + kTraceSlack;
  out.band_edge = std::abs(std::abs(out.trace) - 2.0) <= kTraceSlack;
  return out;
}

double decay_log_slope(const SpinorState& state, Side end) {
  const std::size_t n = state.xs.size();
  if (n < 2) throw ParameterError("state too short for a decay slope");
  const auto mag = [&](std::size_t i) { return std::max(std::abs(state.psi_a[i]), std::abs(state.psi_b[i])); };
  const std::size_t edge = end == Side::Left ? 0 : n - 1;
  const double target = 10.0 * mag(edge);
  std::size_t j = edge;
  while (true) {
    const std::size_t next = end == Side::Left ? j + 1 : j - 1;
    if (next >= n) break;
    j = next;
    if (mag(j) >= target) break;
    if ((end == Side::Left && j == n - 1) || (end == Side::Right && j == 0)) break;
  }
  const double rise = std::log(mag(j)) - std::log(mag(edge));
  const double distance = std::abs(state.xs[j] - state.xs[edge]);
  return -rise / distance;
}

}  // namespace zeromode::dirac
