#include <cmath>
#include <random>
#include <vector>

#include "catch_amalgamated.hpp"
#include "zeromode/dirac.hpp"
#include "zeromode/errors.hpp"

using namespace zeromode;
using namespace zeromode::dirac;
using Catch::Matchers::WithinAbs;

namespace {

SolverOptions quick(double half_width = 30.0, std::size_t steps = 60000) {
  SolverOptions o;
  o.domain = {-half_width, half_width};
  o.steps = steps;
  return o;
}

std::vector<double> found_ky(const ZeroModeReport& r) {
  std::vector<double> out;
  for (const auto& f : r.found) out.push_back(f.ky);
  return out;
}

}  // namespace

TEST_CASE("free solution from the left is e^{k x} in psi_A", "[dirac]") {
  const PotentialSpec zero = constant_potential(0.0);
  const SpinorState s = integrate_dirac(zero, 1.0, Side::Left, quick(10.0, 20000));
  for (std::size_t i = 0; i < s.xs.size(); ++i) REQUIRE(s.psi_b[i] == std::complex<double>{});
  const std::size_t last = s.xs.size() - 1;
  for (const std::size_t i : {std::size_t{0}, last / 3, last / 2, last}) {
    const double expected = std::exp(s.xs[i] - s.xs[last]);
    CHECK_THAT(std::abs(s.psi_a[i]) / std::abs(s.psi_a[last]), WithinAbs(expected, 1e-9 * expected + 1e-300));
  }
}

TEST_CASE("matching residual vanishes at the one-soliton momentum", "[dirac]") {
  for (const double eta : {0.3, 0.5, 1.0}) {
    const PotentialSpec s = one_soliton(eta);
    CHECK(std::abs(matching_residual(s, eta, default_options(s))) < 1e-6);
  }
  const PotentialSpec s = one_soliton(0.5);
  CHECK(std::abs(matching_residual(s, 0.8, default_options(s))) > 1e-2);
}

TEST_CASE("one-soliton scan finds exactly eta", "[dirac]") {
  const PotentialSpec s = one_soliton(0.5);
  const ZeroModeReport r = find_zero_modes(s, {}, default_options(s));
  REQUIRE(r.found.size() == 1);
  CHECK_THAT(r.found[0].ky, WithinAbs(0.5, 1e-6));
  CHECK(r.found[0].error <= 1e-8);
  CHECK(r.found[0].bracket_lo <= r.found[0].ky);
  CHECK(r.found[0].ky <= r.found[0].bracket_hi);
  CHECK(r.matched(1e-3));
  CHECK(r.warnings.empty());
  CHECK(r.ky_grid.size() == r.residuals.size());
}

TEST_CASE("two-soliton special case has two bound momenta", "[dirac]") {
  const PotentialSpec s = two_soliton({0.5, 1.5, 1.0, 1.0});
  const ZeroModeReport r = find_zero_modes(s, {}, default_options(s));
  const auto k = found_ky(r);
  REQUIRE(k.size() == 2);
  CHECK_THAT(k[0], WithinAbs(0.5, 1e-3));
  CHECK_THAT(k[1], WithinAbs(1.5, 1e-3));
}

TEST_CASE("free Dirac has no bound state", "[dirac]") {
  const PotentialSpec zero = constant_potential(0.0);
  const ZeroModeReport r = find_zero_modes(zero, {0.05, 2.0, 60, 1e-8}, quick());
  CHECK(r.found.empty());
  CHECK(r.matched(1e-3));
}

TEST_CASE("missing predictions are reported as warnings", "[dirac]") {
  const PotentialSpec s = two_soliton({1.0, 2.0, 0.5, 0.6});
  const ZeroModeReport r = find_zero_modes(s, {0.05, 3.0, 60, 1e-8}, quick());
  CHECK_FALSE(r.matched(1e-3));
  CHECK_FALSE(r.warnings.empty());
}

TEST_CASE("scan below the continuum threshold is clipped", "[dirac]") {
  const PotentialSpec s = combined_one_soliton({1.0, 1.0, 2.0});
  const ZeroModeReport r = find_zero_modes(s, {0.1, 4.0, 80, 1e-8}, default_options(s));
  CHECK(r.ky_grid.front() > 0.5);
  REQUIRE(r.found.size() == 1);
  CHECK_THAT(r.found[0].ky, WithinAbs(std::sqrt(4.25), 1e-3));
}

TEST_CASE("bound state passes the second-order form check", "[dirac]") {
  const PotentialSpec s = one_soliton(0.5);
  const SpinorState b = bound_state(s, 0.5, default_options(s));
  const double residual = schrodinger_form_check(s, 0.5, b);
  const double estimate = schrodinger_truncation_estimate(s, b);
  CHECK(residual < 10.0 * estimate);
  CHECK(residual < 1e-5);

  // Decays at both ends, at rate k_y.
  const double peak = std::abs(b.psi_a[b.xs.size() / 2]) + std::abs(b.psi_b[b.xs.size() / 2]);
  CHECK(std::max(std::abs(b.psi_a.front()), std::abs(b.psi_b.front())) < 1e-4 * peak);
  CHECK(std::max(std::abs(b.psi_a.back()), std::abs(b.psi_b.back())) < 1e-4 * peak);
  CHECK_THAT(decay_log_slope(b, Side::Left), WithinAbs(-0.5, 0.025));
  CHECK_THAT(decay_log_slope(b, Side::Right), WithinAbs(-0.5, 0.025));
}

TEST_CASE("form check rejects a non-solution", "[dirac]") {
  const PotentialSpec s = one_soliton(0.5);
  SpinorState junk = bound_state(s, 0.5, quick(20.0, 4000));
  std::mt19937 rng(7);
  std::normal_distribution<double> noise(0.0, 1.0);
  for (auto& a : junk.psi_a) a = {noise(rng), noise(rng)};
  CHECK(schrodinger_form_check(s, 0.5, junk) > 1.0);
}

TEST_CASE("free channel satisfies the second-order form", "[dirac]") {
  const PotentialSpec zero = constant_potential(0.0);
  const SpinorState s = integrate_dirac(zero, 1.0, Side::Left, quick(5.0, 10000));
  CHECK(schrodinger_form_check(zero, 1.0, s) < 1e-5);
}

TEST_CASE("spin flip", "[dirac][symmetry]") {
  const PotentialSpec s = one_soliton(0.5);
  CHECK(spin_flip_check(s, 0.5, default_options(s)) < 1e-8);
  CHECK(spin_flip_check(constant_potential(0.0), 1.0, quick()) < 1e-8);
  const PotentialSpec two = two_soliton({0.5, 1.5, 1.0, 1.0});
  CHECK(spin_flip_check(two, 1.5, default_options(two)) < 1e-8);
  // Away from a bound momentum the channel solutions still map onto each other.
  CHECK(spin_flip_check(s, 0.8, default_options(s)) < 1e-8);
}

TEST_CASE("PT symmetry of the effective potentials", "[dirac][symmetry]") {
  std::vector<double> grid;
  for (int i = 0; i <= 1000; ++i) grid.push_back(-10.0 + 0.02 * i);
  const PtReport one = pt_symmetry_check(one_soliton(0.5), 0.5, grid);
  CHECK(one.even);
  CHECK(one.pt_violation < 1e-12);
  const PtReport cn = pt_symmetry_check(periodic_cn(elliptic::EllipticModulus(0.8), 1.0), 1.0, grid);
  CHECK(cn.even);
  CHECK(cn.pt_violation < 1e-12);
  const PtReport shifted = pt_symmetry_check(one_soliton(0.5).shifted(1.0), 0.5, grid);
  CHECK_FALSE(shifted.even);
  CHECK(shifted.evenness_violation > 0.1);
  CHECK(shifted.pt_violation > 0.1);
}

TEST_CASE("monodromy of the free system", "[dirac][periodic]") {
  const double period = 1.7;
  const MonodromyResult r = monodromy_trace(constant_potential(0.0, period), 1.0);
  CHECK_THAT(r.trace, WithinAbs(2.0 * std::cosh(period), 1e-9));
  CHECK(std::abs(r.trace_imag) < 1e-12);
  CHECK_FALSE(r.allowed);
  CHECK_THROWS_AS(monodromy_trace(one_soliton(0.5), 0.5), ParameterError);
}

TEST_CASE("one-gap momentum is an allowed band edge", "[dirac][periodic]") {
  const PotentialSpec s = periodic_one_gap(PeriodicOneGapParams::make(3.0, 2.0, 1.0));
  const MonodromyResult r = monodromy_trace(s, s.predicted_ky()[0]);
  CHECK(r.allowed);
  CHECK(r.band_edge);
  CHECK(std::abs(r.trace_imag) < 1e-9);

  const ZeroModeReport rep = find_zero_modes(s, {0.1, 3.0, 60, 1e-8}, {});
  CHECK(rep.periodic);
  REQUIRE(rep.predicted_checks.size() == 1);
  CHECK(rep.matched(1e-3));
  // Band edges of this potential in k_y: (b + c)/2, (a + c)/2, (a + b)/2.
  const auto k = found_ky(rep);
  REQUIRE(k.size() == 3);
  CHECK_THAT(k[0], WithinAbs(1.5, 1e-6));
  CHECK_THAT(k[1], WithinAbs(2.0, 1e-6));
  CHECK_THAT(k[2], WithinAbs(2.5, 1e-6));
}

TEST_CASE("found momenta are stable under refinement", "[dirac]") {
  const PotentialSpec s = two_soliton({0.5, 1.5, 1.0, 1.0});
  SolverOptions base = default_options(s);
  const ScanOptions scan{0.05, 2.0, 100, 1e-8};
  const auto k0 = found_ky(find_zero_modes(s, scan, base));
  SolverOptions finer = base;
  finer.steps *= 2;
  SolverOptions wider = base;
  wider.domain = {1.5 * base.domain.lo, 1.5 * base.domain.hi};
  wider.steps = base.steps * 3 / 2;
  for (const auto& opts : {finer, wider}) {
    const auto k = found_ky(find_zero_modes(s, scan, opts));
    REQUIRE(k.size() == k0.size());
    for (std::size_t i = 0; i < k.size(); ++i) CHECK(std::abs(k[i] - k0[i]) < 1e-4);
  }
}

TEST_CASE("negated potential has the same spectrum", "[dirac][symmetry]") {
  const PotentialSpec s = n_soliton(NSolitonParams::centered({0.4, 0.9, 1.3}));
  const ScanOptions scan{0.05, 2.0, 100, 1e-8};
  const auto a = found_ky(find_zero_modes(s, scan, default_options(s)));
  const auto b = found_ky(find_zero_modes(s.negated(), scan, default_options(s)));
  REQUIRE(a.size() == 3);
  REQUIRE(b.size() == 3);
  for (std::size_t i = 0; i < 3; ++i) CHECK(std::abs(a[i] - b[i]) < 1e-6);
}

TEST_CASE("solver argument checks", "[dirac]") {
  const PotentialSpec s = one_soliton(0.5);
  CHECK_THROWS_AS(matching_residual(s, 0.0, default_options(s)), ParameterError);
  CHECK_THROWS_AS(integrate_dirac(s, 0.5, Side::Left, quick(3.0, 1000)), ParameterError);
  CHECK_THROWS_AS(find_zero_modes(s, {-1.0, 2.0, 10, 1e-8}, default_options(s)), ParameterError);
  const PotentialSpec c = combined_one_soliton({1.0, 1.0, 2.0});
  CHECK_THROWS_AS(matching_residual(c, 0.3, default_options(c)), ParameterError);
  // Overflow that renormalisation cannot absorb.
  SolverOptions wild = quick(30.0, 10);
  wild.renormalize_every = 1000000;
  CHECK_THROWS_AS(integrate_dirac(constant_potential(0.0), 1e80, Side::Left, wild), IntegrationError);
}
