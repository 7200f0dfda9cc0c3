#include "zeromode/verify.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>
#include <utility>

#include "zeromode/errors.hpp"

namespace zeromode::verify {

namespace {

constexpr double kMaxResolution = 0.2;

struct Coefficients {
  double alpha;
  double beta;
};

struct Lattice {
  double lo;
  double h;
  std::size_t n;       // points in this lattice
  std::size_t stride;  // residual is sampled every `stride` points

  double x(std::ptrdiff_t i) const { return lo + h * static_cast<double>(i); }
};

void check_grid(const SpatialGrid& grid, double max_eta) {
  if (!std::isfinite(grid.x_lo) || !std::isfinite(grid.x_hi) || !(grid.x_hi > grid.x_lo)) {
    throw ParameterError("residual grid needs finite x_lo < x_hi");
  }
  if (grid.n < 5) throw ParameterError("residual grid needs at least 5 points");
  const double h = grid.spacing();
  if (h * max_eta > kMaxResolution) {
    const auto needed = static_cast<std::size_t>(std::ceil((grid.x_hi - grid.x_lo) * max_eta / kMaxResolution)) + 1;
    std::ostringstream msg;
    msg << "grid too coarse: h * eta = " << h * max_eta << " exceeds " << kMaxResolution << "; use at least "
        << needed << " points on [" << grid.x_lo << ", " << grid.x_hi << "]";
    throw ParameterError(msg.str());
  }
}

std::vector<double> sample(const std::function<double(double)>& f, const Lattice& lat) {
  // Two ghost points on each side for the 5-point stencils.
  std::vector<double> u(lat.n + 4);
  for (std::size_t i = 0; i < u.size(); ++i) u[i] = f(lat.x(static_cast<std::ptrdiff_t>(i) - 2));
  return u;
}

double d1(const std::vector<double>& u, std::size_t j, double h) {
  return (8.0 * (u[j + 1] - u[j - 1]) - (u[j + 2] - u[j - 2])) / (12.0 * h);
}

double d3(const std::vector<double>& u, std::size_t j, double h) {
  return ((u[j + 2] - u[j - 2]) - 2.0 * (u[j + 1] - u[j - 1])) / (2.0 * h * h * h);
}

// Nonlinear and dispersive part 6 alpha u u_x + 6 beta u^2 u_x + u_xxx, and u_x.
struct Spatial {
  double flux;
  double ux;
};

Spatial spatial(const std::vector<double>& u, std::size_t j, double h, Coefficients c) {
  const double v = u[j];
  const double ux = d1(u, j, h);
  return {6.0 * c.alpha * v * ux + 6.0 * c.beta * v * v * ux + d3(u, j, h), ux};
}

double evolution_residual(const Field& field, Coefficients c, const Lattice& lat, std::span<const double> times) {
  const double dt = lat.h * lat.h;
  double worst = 0.0;
  for (const double t : times) {
    const std::vector<double> now = sample([&](double x) { return field(x, t); }, lat);
    for (std::size_t i = 0; i < lat.n; i += lat.stride) {
      const double x = lat.x(static_cast<std::ptrdiff_t>(i));
      const double ut = (field(x, t + dt) - field(x, t - dt)) / (2.0 * dt);
      worst = std::max(worst, std::abs(ut + spatial(now, i + 2, lat.h, c).flux));
    }
  }
  return worst;
}

// Least-squares speed for -v f' + flux = 0 on the sampled points.
double fit_speed(const std::function<double(double)>& f, Coefficients c, const Lattice& lat) {
  const std::vector<double> u = sample(f, lat);
  double num = 0.0;
  double den = 0.0;
  for (std::size_t i = 0; i < lat.n; i += lat.stride) {
    const Spatial s = spatial(u, i + 2, lat.h, c);
    num += s.ux * s.flux;
    den += s.ux * s.ux;
  }
  return den > 0.0 ? num / den : 0.0;
}

double stationary_residual(const std::function<double(double)>& f, Coefficients c, double v, const Lattice& lat) {
  const std::vector<double> u = sample(f, lat);
  double worst = 0.0;
  for (std::size_t i = 0; i < lat.n; i += lat.stride) {
    const Spatial s = spatial(u, i + 2, lat.h, c);
    worst = std::max(worst, std::abs(-v * s.ux + s.flux));
  }
  return worst;
}

Lattice coarse(const SpatialGrid& g) { return {g.x_lo, g.spacing(), g.n, 1}; }
Lattice fine(const SpatialGrid& g) { return {g.x_lo, 0.5 * g.spacing(), 2 * g.n - 1, 2}; }

void finish(ResidualReport& r) {
  if (r.residual_half_h && *r.residual_half_h > 0.0 && r.residual_norm > 0.0) {
    r.convergence_order = std::log2(r.residual_norm / *r.residual_half_h);
  }
}

ResidualReport evolution_report(const Field& field, Coefficients c, double max_eta, const SpatialGrid& grid,
                                std::span<const double> times) {
  check_grid(grid, max_eta);
  for (const double t : times) {
    if (!std::isfinite(t)) throw ParameterError("residual times must be finite");
  }
  ResidualReport r;
  r.grid_h = grid.spacing();
  r.time_samples.assign(times.begin(), times.end());
  r.residual_norm = evolution_residual(field, c, coarse(grid), times);
  r.residual_half_h = evolution_residual(field, c, fine(grid), times);
  finish(r);
  return r;
}

}  // namespace

double SpatialGrid::spacing() const { return (x_hi - x_lo) / static_cast<double>(n - 1); }

ResidualReport mkdv_residual(const NSolitonParams& p, const SpatialGrid& grid, std::span<const double> times) {
  p.validate();
  const Field field = [&p](double x, double t) { return n_soliton_field(p, x, t); };
  return evolution_report(field, {0.0, 1.0}, p.etas.back(), grid, times);
}

ResidualReport mkdv_residual(const Field& u, double max_eta, const SpatialGrid& grid, std::span<const double> times) {
  return evolution_report(u, {0.0, 1.0}, max_eta, grid, times);
}

ResidualReport combined_residual(const Field& u, double alpha, double beta, double max_eta, const SpatialGrid& grid,
                                 std::span<const double> times) {
  return evolution_report(u, {alpha, beta}, max_eta, grid, times);
}

ResidualReport combined_residual(const CombinedParams& p, const SpatialGrid& grid, std::span<const double> times) {
  if (times.empty()) throw ParameterError("combined residual needs at least one time sample");
  const PotentialSpec spec = combined_one_soliton(p);
  const Coefficients c{p.alpha, p.beta};
  check_grid(grid, p.eta);
  const std::function<double(double)> profile = [&spec](double xi) { return -spec.value(xi); };

  ResidualReport r;
  r.grid_h = grid.spacing();
  r.time_samples.assign(times.begin(), times.end());
  const auto run = [&](const Lattice& lat) {
    const double v = fit_speed(profile, c, lat);
    const Field field = [&, v](double x, double t) { return profile(x - v * t); };
    return std::pair{v, evolution_residual(field, c, lat, times)};
  };
  const auto [v, res] = run(coarse(grid));
  r.fitted_speed = v;
  r.residual_norm = res;
  r.residual_half_h = run(fine(grid)).second;
  finish(r);
  return r;
}

ResidualReport stationary_elliptic_residual(const PotentialSpec& spec, const SpatialGrid& grid) {
  const Family f = spec.family();
  if (f != Family::PeriodicOneGap && f != Family::PeriodicCn && f != Family::Constant) {
    throw ParameterError("stationary residual applies to the periodic and constant families only, not " +
                         std::string(family_name(f)));
  }
  check_grid(grid, spec.max_eta());
  const Coefficients c{0.0, 1.0};
  const std::function<double(double)> profile = [&spec](double x) { return spec.value(x); };

  ResidualReport r;
  r.grid_h = grid.spacing();
  const double v = fit_speed(profile, c, coarse(grid));
  r.fitted_speed = v;
  r.residual_norm = stationary_residual(profile, c, v, coarse(grid));
  r.residual_half_h = stationary_residual(profile, c, fit_speed(profile, c, fine(grid)), fine(grid));
  finish(r);
  return r;
}

std::optional<double> analytic_slope(const PotentialSpec& spec, double x) {
  const double y = x - spec.shift();
  if (const auto* p = std::get_if<PeriodicCnParams>(&spec.params())) {
    const double eta = p->eta();
    const auto j = elliptic::jacobi(eta * y, p->modulus);
    return spec.sign() * p->modulus.value() * eta * eta * j.sn * j.dn;
  }
  if (const auto* p = std::get_if<PeriodicOneGapParams>(&spec.params())) {
    const auto j = elliptic::jacobi(p->eta * y, p->modulus);
    const double big_p = (p->a - p->b) * (p->a + p->b + p->c);
    const double big_q = p->a * (p->a + 2.0 * p->b + p->c);
    const double big_r = p->a - p->b;
    const double big_s = p->a + 2.0 * p->b + p->c;
    const double den = big_r * j.sn * j.sn + big_s;
    const double dv_ds2 = (big_p * big_s + big_q * big_r) / (den * den);
    return spec.sign() * dv_ds2 * 2.0 * p->eta * j.sn * j.cn * j.dn;
  }
  if (spec.family() == Family::Constant) return 0.0;
  return std::nullopt;
}

double slope_cross_check(const PotentialSpec& spec, const SpatialGrid& grid) {
  check_grid(grid, spec.max_eta());
  if (!analytic_slope(spec, grid.x_lo)) {
    throw ParameterError("no analytic slope for family " + std::string(family_name(spec.family())));
  }
  const Lattice lat = coarse(grid);
  const std::vector<double> u = sample([&spec](double x) { return spec.value(x); }, lat);
  double worst = 0.0;
  for (std::size_t i = 0; i < lat.n; ++i) {
    worst = std::max(worst, std::abs(d1(u, i + 2, lat.h) - *analytic_slope(spec, lat.x(static_cast<std::ptrdiff_t>(i)))));
  }
  return worst;
}

}  // namespace zeromode::verify
