#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <thread>
#include <vector>

#include "catch_amalgamated.hpp"
#include "oracles.hpp"
#include "zeromode/errors.hpp"
#include "zeromode/potential_json.hpp"
#include "zeromode/potentials.hpp"

using namespace zeromode;
using Catch::Matchers::WithinAbs;

namespace {

std::vector<double> linspace(double lo, double hi, int n) {
  std::vector<double> xs(n);
  for (int i = 0; i < n; ++i) xs[i] = lo + (hi - lo) * i / (n - 1);
  return xs;
}

std::vector<PotentialSpec> even_families() {
  return {one_soliton(0.5),
          one_soliton(1.3),
          two_soliton({0.5, 1.5, 1.0, 1.0}),
          two_soliton({1.0, 2.0, 0.5, 0.6}),
          two_soliton({0.5, 0.8, 1.5, 2.6}),
          periodic_one_gap(PeriodicOneGapParams::make(3.0, 2.0, 1.0)),
          periodic_one_gap(PeriodicOneGapParams::make(3.5, 2.2, 1.4)),
          periodic_cn(elliptic::EllipticModulus(0.8), 1.0),
          periodic_cn(elliptic::EllipticModulus(0.9), 2.0),
          combined_one_soliton({1.0, 1.0, 2.0}),
          combined_one_soliton({2.0, 1.0, 2.0})};
}

}  // namespace

TEST_CASE("one-soliton", "[potentials]") {
  const PotentialSpec s = one_soliton(0.5);
  CHECK(s.family() == Family::OneSoliton);
  CHECK(s.value(0.0) == -1.0);
  CHECK(s.predicted_ky() == std::vector<double>{0.5});
  CHECK_FALSE(s.periodic());
  CHECK_THAT(one_soliton(1.0).value(2.0), WithinAbs(-2.0 * oracle::sech(4.0), 1e-15));
  CHECK_THAT(one_soliton(1.0).value(2.0), WithinAbs(-0.07323798694737306, 1e-16));
  CHECK_THROWS_AS(one_soliton(0.0), ParameterError);
  CHECK_THROWS_AS(one_soliton(-1.0), ParameterError);
}

TEST_CASE("two-soliton special case is -2 sech x", "[potentials]") {
  const PotentialSpec s = two_soliton({0.5, 1.5, 1.0, 1.0});
  CHECK(s.value(0.0) == Catch::Approx(-2.0).epsilon(1e-15));
  double worst = 0.0;
  for (const double x : linspace(-10.0, 10.0, 2001)) worst = std::max(worst, std::abs(s.value(x) + 2.0 * oracle::sech(x)));
  CHECK(worst < 1e-10);
  CHECK(s.predicted_ky() == std::vector<double>{0.5, 1.5});
  // Far tails stay finite and small.
  CHECK(std::abs(s.value(300.0)) < 1e-100);
}

TEST_CASE("two-soliton parameter checks", "[potentials]") {
  CHECK_THROWS_AS(two_soliton({1.0, 1.0, 1.0, 1.0}), ParameterError);
  CHECK_THROWS_AS(two_soliton({2.0, 1.0, 1.0, 1.0}), ParameterError);
  CHECK_THROWS_AS(two_soliton({-1.0, 1.0, 1.0, 1.0}), ParameterError);
  // Opposite-sign constants can make the denominator vanish.
  CHECK_THROWS_AS(two_soliton({1.0, 2.0, 3.0, -1.0}), EvaluationError);
  try {
    two_soliton({1.0, 2.0, 3.0, -1.0});
  } catch (const EvaluationError& e) {
    CHECK(std::isfinite(e.x()));
  }
}

TEST_CASE("one-gap periodic potential", "[potentials]") {
  const auto p = PeriodicOneGapParams::make(3.0, 2.0, 1.0);
  CHECK_THAT(p.modulus.value(), WithinAbs(std::sqrt(7.0 / 16.0), 1e-15));
  CHECK_THAT(p.eta, WithinAbs(2.0, 1e-15));
  const PotentialSpec s = periodic_one_gap(p);
  CHECK(s.periodic());
  CHECK_THAT(*s.period(), WithinAbs(2.0 * oracle::complete_k(std::sqrt(7.0 / 16.0)) / 2.0, 1e-11));
  CHECK_THAT(s.value(0.0), WithinAbs(-3.0, 1e-15));
  CHECK(s.predicted_ky() == std::vector<double>{p.eta});

  CHECK_THROWS_AS(PeriodicOneGapParams::make(1.0, 2.0, 0.5), ParameterError);
  CHECK_THROWS_AS(PeriodicOneGapParams::make(3.0, 1.0, 2.0), ParameterError);
  CHECK_NOTHROW(PeriodicOneGapParams::make(3.0, 1.0, 1.0));
}

TEST_CASE("one-gap m -> 1 limit", "[potentials]") {
  for (const double a : {0.7, 1.0, 2.5}) {
    const auto p = PeriodicOneGapParams::make(a, 0.0, 0.0);
    CHECK(p.modulus.value() == 1.0);
    CHECK_THAT(p.eta, WithinAbs(a / 2.0, 1e-15));
    const PotentialSpec s = periodic_one_gap(p);
    CHECK_FALSE(s.periodic());
    for (const double x : linspace(-10.0, 10.0, 401)) {
      CHECK_THAT(s.value(x), WithinAbs(-a * oracle::sech(a * x), 1e-8));
    }
  }
}

TEST_CASE("cn periodic potential", "[potentials]") {
  const PotentialSpec s = periodic_cn(elliptic::EllipticModulus(0.8), 1.0);
  const auto& p = std::get<PeriodicCnParams>(s.params());
  CHECK_THAT(p.eta(), WithinAbs(std::sqrt(1.0 / 0.28), 1e-14));
  CHECK_THAT(p.eta(), WithinAbs(1.889822, 1e-6));
  CHECK_THAT(s.value(0.0), WithinAbs(-0.8 * p.eta(), 1e-15));
  CHECK_THAT(*s.period(), WithinAbs(4.0 * oracle::complete_k(0.8) / p.eta(), 1e-10));
  CHECK_THROWS_AS(periodic_cn(elliptic::EllipticModulus(0.7), 1.0), ParameterError);
  CHECK_THROWS_AS(periodic_cn(elliptic::EllipticModulus(0.9), -1.0), ParameterError);

  const PotentialSpec near = periodic_cn(elliptic::EllipticModulus(1.0 - 1e-12), 1.0);
  const double eta = std::get<PeriodicCnParams>(near.params()).eta();
  for (const double x : linspace(-8.0, 8.0, 161)) {
    CHECK_THAT(near.value(x), WithinAbs(-eta * oracle::sech(eta * x), 1e-6));
  }
}

TEST_CASE("combined one-soliton", "[potentials]") {
  const PotentialSpec s = combined_one_soliton({1.0, 1.0, 2.0});
  const auto& p = std::get<CombinedParams>(s.params());
  CHECK_THAT(p.cos_theta(), WithinAbs(1.0 / std::sqrt(17.0), 1e-15));
  CHECK_THAT(p.gamma(), WithinAbs(0.5, 1e-15));
  REQUIRE(s.predicted_ky().size() == 1);
  CHECK_THAT(s.predicted_ky()[0], WithinAbs(std::sqrt(4.25), 1e-15));
  CHECK_THAT(s.predicted_ky()[0], WithinAbs(2.061552, 1e-6));

  // alpha = 2: V(0) = -4 sin(theta) / (cos(theta) + 1) = -4 tan(theta / 2).
  const double theta = std::acos(2.0 / std::sqrt(20.0));
  CHECK_THAT(combined_one_soliton({2.0, 1.0, 2.0}).value(0.0), WithinAbs(-4.0 * std::tan(theta / 2.0), 1e-14));

  // alpha = 0 reduces to the mKdV one-soliton.
  for (const double eta : {0.3, 0.5, 1.0, 2.0}) {
    const PotentialSpec c = combined_one_soliton({0.0, 1.0, eta});
    const PotentialSpec o = one_soliton(eta);
    for (const double x : linspace(-6.0, 6.0, 121)) CHECK_THAT(c.value(x), WithinAbs(o.value(x), 1e-14));
  }

  // The Dirac-facing potential carries the constant shift.
  CHECK_THAT(s.dirac_asymptote(), WithinAbs(0.5, 1e-15));
  CHECK_THAT(s.dirac_value(40.0), WithinAbs(0.5, 1e-15));
  CHECK_THROWS_AS(combined_one_soliton({1.0, 0.0, 2.0}), ParameterError);
  CHECK_THROWS_AS(combined_one_soliton({1.0, 1.0, -2.0}), ParameterError);
}

TEST_CASE("evenness of the centred families", "[potentials][property]") {
  for (const PotentialSpec& s : even_families()) {
    for (const double x : linspace(0.0, 15.0, 301)) {
      CHECK(std::abs(s.value(-x) - s.value(x)) < 1e-12);
    }
  }
}

TEST_CASE("periodic specs repeat at 1000 random points", "[potentials][property]") {
  std::mt19937_64 rng(20261016);
  std::uniform_real_distribution<double> dist(-50.0, 50.0);
  for (const PotentialSpec& s : even_families()) {
    if (!s.periodic()) continue;
    for (int i = 0; i < 1000; ++i) {
      const double x = dist(rng);
      CHECK(std::abs(s.value(x + *s.period()) - s.value(x)) < 1e-10);
    }
  }
}

TEST_CASE("predicted momenta are nonempty and ascending", "[potentials][property]") {
  for (const PotentialSpec& s : even_families()) {
    REQUIRE_FALSE(s.predicted_ky().empty());
    CHECK(std::is_sorted(s.predicted_ky().begin(), s.predicted_ky().end()));
    CHECK(s.predicted_ky().front() > 0.0);
  }
  CHECK(constant_potential(0.0).predicted_ky().empty());
}

TEST_CASE("evaluate checks its grid", "[potentials]") {
  const PotentialSpec s = one_soliton(0.5);
  const std::vector<double> xs = {-1.0, 0.0, 1.0};
  const auto v = evaluate(s, xs);
  CHECK(v[0] == v[2]);
  CHECK(v[1] == -1.0);
  const std::vector<double> bad = {0.0, 0.0, 1.0};
  CHECK_THROWS_AS(evaluate(s, bad), EvaluationError);
  const std::vector<double> nan = {0.0, std::nan("")};
  CHECK_THROWS(evaluate(s, nan));
}

TEST_CASE("sign and shift transforms", "[potentials]") {
  const PotentialSpec s = one_soliton(0.5);
  const PotentialSpec t = s.negated().shifted(1.5);
  CHECK(t.sign() == -1.0);
  CHECK(t.shift() == 1.5);
  for (const double x : {-2.0, 0.0, 0.7, 3.0}) CHECK(t.value(x) == -s.value(x - 1.5));
  CHECK(t.predicted_ky() == s.predicted_ky());
}

TEST_CASE("JSON round trip", "[potentials][json]") {
  std::vector<PotentialSpec> specs = even_families();
  specs.push_back(n_soliton(NSolitonParams::centered({0.4, 0.9, 1.3}, 0.25)));
  specs.push_back(constant_potential(0.3, 2.0));
  specs.push_back(one_soliton(0.5).negated().shifted(-2.0));
  for (const PotentialSpec& s : specs) {
    const PotentialSpec back = spec_from_json(to_json(s));
    CHECK(back.family() == s.family());
    CHECK(back.predicted_ky() == s.predicted_ky());
    for (const double x : {-3.0, -0.4, 0.0, 1.1, 5.0}) CHECK(back.value(x) == s.value(x));
  }
  CHECK_THROWS_AS(spec_from_json(nlohmann::json{{"family", "bogus"}}), ParameterError);
  CHECK_THROWS_AS(spec_from_json(nlohmann::json{{"family", "one-soliton"}, {"params", nlohmann::json::object()}}),
                  ParameterError);
  CHECK_THROWS_AS(spec_from_json(nlohmann::json{{"family", "one-soliton"}, {"params", {{"eta", "x"}}}}),
                  ParameterError);
}

TEST_CASE("concurrent evaluation agrees with serial", "[potentials]") {
  const PotentialSpec s = n_soliton(NSolitonParams::centered({0.4, 0.9, 1.3}));
  const auto xs = linspace(-10.0, 10.0, 2001);
  const auto serial = evaluate(s, xs);
  std::vector<std::vector<double>> results(4);
  {
    std::vector<std::jthread> pool;
    for (auto& r : results) pool.emplace_back([&] { r = evaluate(s, xs); });
  }
  for (const auto& r : results) CHECK(r == serial);
}
