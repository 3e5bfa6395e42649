#include <algorithm>
#include <cmath>
#include <numbers>

#include "doctest.h"
#include "o2lyap/errors.hpp"
#include "o2lyap/functional.hpp"
#include "support.hpp"

using namespace o2lyap;
using namespace o2lyap::testing;

namespace {

constexpr double kPi = std::numbers::pi;

ScalarField smooth_field(std::size_t n) {
  return periodic_field(n, 1.0, [](double x) {
    return 0.6 * std::cos(2 * kPi * x) + 0.3 * std::sin(4 * kPi * x) + 0.1;
  });
}

}  // namespace

TEST_SUITE("functional") {

TEST_CASE("gradient") {
  SUBCASE("constant field") {
    ScalarField f;
    f.values.assign(16, 2.5);
    for (double v : gradient(f).values) CHECK(v == 0.0);
  }
  SUBCASE("sine on the circle") {
    const auto f = periodic_field(256, 1.0, [](double x) { return std::sin(2 * kPi * x); });
    const auto g = gradient(f);
    double err = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) {
      err = std::max(err, std::abs(g.values[i] - 2 * kPi * std::cos(2 * kPi * f.x(i))));
    }
    CHECK(err <= 1e-3);
  }
  SUBCASE("linear ramp on an interval, including the ends") {
    ScalarField f;
    f.bc = BoundaryCondition::Dirichlet;
    f.domain_length = 2.0;
    f.values.resize(11);
    for (std::size_t i = 0; i < 11; ++i) f.values[i] = 3.0 * f.x(i) - 1.0;
    for (double v : gradient(f).values) CHECK(v == doctest::Approx(3.0).epsilon(1e-12));
  }
  SUBCASE("too few points") {
    ScalarField f;
    f.values.assign(4, 0.0);
    CHECK_THROWS_AS(gradient(f), ConfigError);
  }
}

TEST_CASE("grid layout and quadrature") {
  ScalarField p;
  p.values.assign(10, 1.0);
  p.domain_length = 2.0;
  CHECK(p.spacing() == doctest::Approx(0.2));
  CHECK(grid_integral(p, p.values) == doctest::Approx(2.0));
  ScalarField d = p;
  d.bc = BoundaryCondition::Neumann;
  CHECK(d.spacing() == doctest::Approx(2.0 / 9.0));
  CHECK(grid_integral(d, d.values) == doctest::Approx(2.0));
  ScalarField dir = d;
  dir.bc = BoundaryCondition::Dirichlet;
  CHECK_THROWS_AS(dir.validate(true), ConfigError);
}

TEST_CASE("V examples") {
  SUBCASE("fbar = -u on a constant field gives l c^2 / 2") {
    const NonlinearityO2 nl{[](double u, double) { return -u; }, [](double, double) { return 0.0; },
                            "-u"};
    LagrangianEvaluator ev(nl, CharflowConfig{}, QuadratureConfig{});
    ScalarField f;
    f.domain_length = 3.0;
    f.values.assign(32, 0.8);
    CHECK(evaluate_V(ev, f).V == doctest::Approx(3.0 * 0.32).epsilon(1e-12));
  }
  SUBCASE("zero field gives V = 0") {
    LagrangianEvaluator ev(sine_coupled(3.0), CharflowConfig{}, QuadratureConfig{});
    ScalarField f;
    f.values.assign(16, 0.0);
    CHECK(evaluate_V(ev, f).V == 0.0);
  }
  SUBCASE("classical case equals the textbook energy") {
    const double lambda = 15.0;
    LagrangianEvaluator ev(cubic(lambda), CharflowConfig{}, QuadratureConfig{});
    const auto f = smooth_field(128);
    const auto ux = gradient(f);
    double energy = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) {
      energy += 0.5 * ux.values[i] * ux.values[i] - cubic_primitive(lambda, f.values[i]);
    }
    energy *= f.spacing();
    const auto rep = evaluate_V(ev, f);
    CHECK(std::abs(rep.V - energy) <= 1e-8);
    CHECK(rep.convexity_min == 1.0);
    CHECK(rep.dissipation == 0.0);
  }
}

TEST_CASE("dissipation examples") {
  const auto f = smooth_field(64);
  ScalarField ut = f.with_values(std::vector<double>(64, 0.0));
  LagrangianEvaluator classical(cubic(15.0), CharflowConfig{}, QuadratureConfig{});
  CHECK(dissipation_rate(classical, f, ut) == 0.0);

  for (std::size_t i = 0; i < 64; ++i) ut.values[i] = std::sin(2 * kPi * f.x(i)) + 0.2;
  double l2 = 0.0;
  for (double v : ut.values) l2 += v * v;
  l2 *= f.spacing();
  CHECK(dissipation_rate(classical, f, ut) == doctest::Approx(-l2).epsilon(1e-13));

  LagrangianEvaluator general(sine_coupled(2.0), CharflowConfig{}, QuadratureConfig{});
  CHECK(dissipation_rate(general, f, ut) <= 0.0);

  const NonlinearityO2 two{[](double, double) { return 2.0; }, [](double, double) { return 0.0; },
                           "2"};
  CHECK(dissipation_rate(classical, f, ut, two) == doctest::Approx(-0.5 * l2).epsilon(1e-13));
  const NonlinearityO2 negative{[](double, double) { return -1.0; },
                                [](double, double) { return 0.0; }, "-1"};
  CHECK_THROWS_AS(dissipation_rate(classical, f, ut, negative), DomainError);

  ScalarField other = ut;
  other.values.resize(32);
  CHECK_THROWS_AS(dissipation_rate(classical, f, other), ConfigError);
}

TEST_CASE("Lagrangian failures carry the grid index") {
  const NonlinearityO2 riccati{[](double, double q) { return -q * q; },
                               [](double, double q) { return -2.0 * q; }, "riccati"};
  CharflowConfig cfg;
  cfg.escape_bound = 1e6;
  LagrangianEvaluator ev(riccati, cfg, QuadratureConfig{});
  ScalarField f;
  f.values.assign(16, 0.0);
  f.values[5] = -2.0;
  f.values[6] = -2.0;
  try {
    evaluate_V(ev, f);
    FAIL("expected GridEvaluationError");
  } catch (const GridEvaluationError& e) {
    CHECK(e.index() == 5);  // first point whose backward characteristic escapes
  }
}

TEST_CASE("translation and reflection invariance on the circle") {
  LagrangianEvaluator ev(sine_coupled(2.0), CharflowConfig{}, QuadratureConfig{});
  const auto f = smooth_field(64);
  const double V = evaluate_V(ev, f).V;
  for (int shift : {1, 7, 33}) {
    auto g = f;
    std::rotate(g.values.begin(), g.values.begin() + shift, g.values.end());
    CHECK(evaluate_V(ev, g).V == doctest::Approx(V).epsilon(1e-13));
  }
  auto r = f;
  std::reverse(r.values.begin(), r.values.end());
  CHECK(evaluate_V(ev, r).V == doctest::Approx(V).epsilon(1e-13));
}

TEST_CASE("V converges at second order in 1/n") {
  // A non-trigonometric smooth field, so the rectangle rule is not exact.
  const auto field = [](std::size_t n) {
    return periodic_field(n, 1.0, [](double x) { return 0.5 * std::exp(std::sin(2 * kPi * x)) - 0.6; });
  };
  LagrangianEvaluator ev(cubic(2.0, 1.0), CharflowConfig{}, QuadratureConfig{});
  const double v1 = evaluate_V(ev, field(32)).V;
  const double v2 = evaluate_V(ev, field(64)).V;
  const double v3 = evaluate_V(ev, field(128)).V;
  const double ratio = std::abs(v1 - v2) / std::abs(v2 - v3);
  CHECK(ratio == doctest::Approx(4.0).epsilon(0.1));
}

TEST_CASE("centred rates are second order on uneven spacing") {
  const std::vector<double> t{0.0, 0.1, 0.25, 0.3, 0.45};
  std::vector<double> V;
  for (double s : t) V.push_back(2.0 * s * s - s + 1.0);
  const auto r = centred_rates(t, V);
  REQUIRE(r.size() == 3);
  for (std::size_t k = 0; k < 3; ++k) CHECK(r[k] == doctest::Approx(4.0 * t[k + 1] - 1.0));

  std::vector<double> rates;
  for (double s : t) rates.push_back(4.0 * s - 1.0);
  for (double res : decay_residuals(t, V, rates)) CHECK(res <= 1e-12);
  CHECK_THROWS_AS(decay_residuals(t, V, std::vector<double>(2)), ConfigError);
}

}  // TEST_SUITE
