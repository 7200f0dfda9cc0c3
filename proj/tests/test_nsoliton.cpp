#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "catch_amalgamated.hpp"
#include "oracles.hpp"
#include "zeromode/errors.hpp"
#include "zeromode/potentials.hpp"

using namespace zeromode;
using Catch::Matchers::WithinAbs;

namespace {

// Crest position: the point where u(x + h) = u(x - h), found by bisection.
// For a profile symmetric about its crest this is exact regardless of h.
double crest(const std::function<double(double)>& u, double lo, double hi) {
  constexpr double h = 1e-3;
  const auto g = [&](double x) { return std::abs(u(x + h)) - std::abs(u(x - h)); };
  double glo = g(lo);
  for (int i = 0; i < 200 && hi - lo > 1e-15; ++i) {
    const double mid = 0.5 * (lo + hi);
    const double gm = g(mid);
    if ((gm > 0.0) == (glo > 0.0)) {
      lo = mid;
      glo = gm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

double max_aligned_deviation(const NSolitonParams& p, const std::function<double(double)>& reference) {
  const auto u = [&](double x) { return n_soliton_field(p, x, p.t); };
  const double xc = crest(u, -12.0, 12.0);
  const double sign = u(xc) * reference(0.0) < 0.0 ? -1.0 : 1.0;
  double worst = 0.0;
  for (int i = 0; i <= 2000; ++i) {
    const double x = -10.0 + 0.01 * i;
    worst = std::max(worst, std::abs(sign * u(x + xc) - reference(x)));
  }
  return worst;
}

}  // namespace

TEST_CASE("N = 1 reproduces the one-soliton up to sign and translation", "[nsoliton]") {
  for (const double eta : {0.3, 0.5, 1.0}) {
    const auto ref = [eta](double x) { return -2.0 * eta * oracle::sech(2.0 * eta * x); };
    // Centred and off-centre norming constants of both signs.
    for (const double d : {2.0 * eta, -2.0 * eta, 5.0, -0.3}) {
      const NSolitonParams p{{eta}, {d}, 0.0};
      CHECK(max_aligned_deviation(p, ref) < 1e-10);
    }
  }
}

TEST_CASE("N = 2 with (1/2, 3/2) reproduces -2 sech x", "[nsoliton]") {
  const NSolitonParams p = NSolitonParams::centered({0.5, 1.5});
  const auto ref = [](double x) { return -2.0 * oracle::sech(x); };
  CHECK(max_aligned_deviation(p, ref) < 1e-8);
  // Centred choice needs no alignment at all: u = +2 sech x.
  for (int i = 0; i <= 200; ++i) {
    const double x = -10.0 + 0.1 * i;
    CHECK_THAT(n_soliton_field(p, x, 0.0), WithinAbs(2.0 * oracle::sech(x), 1e-12));
  }
}

TEST_CASE("closed-form two-soliton matches the determinant for unit constants", "[nsoliton]") {
  for (const auto& tp : {TwoSolitonParams{0.5, 1.5, 1.0, 1.0}, TwoSolitonParams{1.0, 2.0, 1.0, -1.0},
                         TwoSolitonParams{0.7, 1.1, -1.0, -1.0}}) {
    const auto np = two_soliton_as_n_soliton(tp);
    REQUIRE(np.has_value());
    const PotentialSpec closed = two_soliton(tp);
    for (int i = 0; i <= 300; ++i) {
      const double x = -15.0 + 0.1 * i;
      CHECK_THAT(n_soliton_field(*np, x, 0.0), WithinAbs(closed.value(x), 1e-9));
    }
  }
  CHECK_FALSE(two_soliton_as_n_soliton({1.0, 2.0, 0.5, 0.6}).has_value());
}

TEST_CASE("Jacobi-formula derivative matches differenced phase", "[nsoliton]") {
  const NSolitonParams p{{0.4, 0.9, 1.3}, {1.0, -2.0, 0.7}, 0.1};
  constexpr double h = 1e-5;
  for (int i = 0; i <= 60; ++i) {
    const double x = -3.0 + 0.1 * i;
    const std::complex<double> ratio = n_soliton_determinant(p, x + h, p.t) / n_soliton_determinant(p, x - h, p.t);
    const double dphase = std::arg(ratio) / (2.0 * h);
    CHECK_THAT(n_soliton_field(p, x, p.t), WithinAbs(-2.0 * dphase, 1e-6));
  }
}

TEST_CASE("N = 3 decays and stays finite", "[nsoliton]") {
  const NSolitonParams p = NSolitonParams::centered({0.5, 1.0, 1.5});
  for (int i = 0; i <= 4000; ++i) {
    const double x = -40.0 + 0.02 * i;
    REQUIRE(std::isfinite(n_soliton_field(p, x, 0.0)));
  }
  CHECK(std::abs(n_soliton_field(p, 20.0, 0.0)) < 1e-6);
  CHECK(std::abs(n_soliton_field(p, -20.0, 0.0)) < 1e-6);
  // Far tails where det(I + A) itself would overflow.
  CHECK(std::abs(n_soliton_field(p, -400.0, 0.0)) < 1e-100);
}

TEST_CASE("norming constants evolve as exp(8 eta^3 t)", "[nsoliton]") {
  const NSolitonParams p{{0.5, 1.5}, {1.0, -3.0}, 0.0};
  for (const double t : {-1.0, 0.0, 0.5, 1.0}) {
    CHECK_THAT(p.norming(0, t), WithinAbs(std::exp(t), 1e-14));
    CHECK_THAT(p.norming(1, t) / -3.0, WithinAbs(std::exp(27.0 * t), 1e-14 * std::exp(27.0 * t)));
  }
}

TEST_CASE("negating the norming constants negates u", "[nsoliton]") {
  const NSolitonParams p{{0.4, 0.9, 1.3}, {1.0, 2.0, 3.0}, 0.0};
  const NSolitonParams q{{0.4, 0.9, 1.3}, {-1.0, -2.0, -3.0}, 0.0};
  for (int i = 0; i <= 100; ++i) {
    const double x = -10.0 + 0.2 * i;
    CHECK_THAT(n_soliton_field(q, x, 0.0), WithinAbs(-n_soliton_field(p, x, 0.0), 1e-12));
  }
}

TEST_CASE("centred norming constants", "[nsoliton]") {
  const NSolitonParams p = NSolitonParams::centered({0.5, 1.5});
  CHECK_THAT(p.d0s[0], WithinAbs(2.0, 1e-15));
  CHECK_THAT(p.d0s[1], WithinAbs(6.0, 1e-15));
  const NSolitonParams three = NSolitonParams::centered({0.4, 0.9, 1.3});
  for (int i = 0; i <= 100; ++i) {
    const double x = 0.1 * i;
    CHECK(std::abs(n_soliton_field(three, x, 0.0) - n_soliton_field(three, -x, 0.0)) < 1e-10);
  }
}

TEST_CASE("N-soliton parameter validation", "[nsoliton]") {
  CHECK_THROWS_AS(NSolitonParams({}, {}, 0.0).validate(), ParameterError);
  CHECK_THROWS_AS(NSolitonParams({1.0, 0.5}, {1.0, 1.0}, 0.0).validate(), ParameterError);
  CHECK_THROWS_AS(NSolitonParams({0.5, 0.5}, {1.0, 1.0}, 0.0).validate(), ParameterError);
  CHECK_THROWS_AS(NSolitonParams({0.5}, {0.0}, 0.0).validate(), ParameterError);
  CHECK_THROWS_AS(NSolitonParams({0.5}, {1.0, 2.0}, 0.0).validate(), ParameterError);
  CHECK_THROWS_AS(NSolitonParams({-0.5}, {1.0}, 0.0).validate(), ParameterError);
  CHECK_THROWS_AS(n_soliton({{0.5}, {1.0}, std::nan("")}), ParameterError);
}
