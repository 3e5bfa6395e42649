#include <cmath>
#include <vector>

#include "doctest.h"
#include "o2lyap/errors.hpp"
#include "o2lyap/lagrangian.hpp"
#include "support.hpp"

using namespace o2lyap;
using namespace o2lyap::testing;

namespace {

const QuadratureConfig kFine{QuadratureRule::GaussLegendre, 16, 16};

CharflowConfig tight() {
  CharflowConfig c;
  c.rel_tol = 1e-12;
  c.abs_tol = 1e-14;
  return c;
}

std::vector<double> grid(double lo, double hi, int n) {
  std::vector<double> v;
  for (int i = 0; i < n; ++i) v.push_back(lo + (hi - lo) * i / (n - 1));
  return v;
}

}  // namespace

TEST_SUITE("lagrangian") {

TEST_CASE("metric exponent examples") {
  LagrangianEvaluator classical(cubic(2.0), CharflowConfig{}, QuadratureConfig{});
  LagrangianEvaluator linear(linear_q(1.0), CharflowConfig{}, QuadratureConfig{});
  for (double u : {-1.5, 0.0, 0.8}) {
    for (double q : {0.0, 1.2}) {
      CHECK(classical.metric_exponent(u, q) == doctest::Approx(0.0).epsilon(1e-14));
      CHECK(linear.metric_exponent(u, q) == doctest::Approx(u).epsilon(1e-9));
    }
  }
}

TEST_CASE("exp E(u, q) = Psi_q^{0,u}(q)") {
  LagrangianEvaluator ev(cubic(2.0, 1.0), CharflowConfig{}, QuadratureConfig{});
  for (double u : {-1.0, -0.3, 0.5, 1.0}) {
    for (double q : {0.0, 0.4, 1.5}) {
      CHECK(std::abs(std::exp(ev.metric_exponent(u, q)) - ev.base_sensitivity(u, q)) <= 1e-6);
    }
  }
}

TEST_CASE("node-quadrature route agrees with transport") {
  const QuadratureConfig qc{QuadratureRule::GaussLegendre, 8, 8};
  LagrangianEvaluator by_transport(sine_coupled(2.0), CharflowConfig{}, qc,
                                   LagrangianForm::DoubleIntegral, ExponentRoute::Transport);
  LagrangianEvaluator by_nodes(sine_coupled(2.0), CharflowConfig{}, qc,
                               LagrangianForm::DoubleIntegral, ExponentRoute::NodeQuadrature);
  for (double u : {-1.2, 0.4, 1.1}) {
    for (double q : {0.0, 0.9}) {
      CHECK(by_nodes.metric_exponent(u, q) ==
            doctest::Approx(by_transport.metric_exponent(u, q)).epsilon(1e-8));
    }
  }
}

TEST_CASE("potential F") {
  const double lambda = 2.0;
  LagrangianEvaluator classical(cubic(lambda), CharflowConfig{}, QuadratureConfig{});
  CHECK(classical.potential(0.0) == 0.0);
  for (double u : {-1.7, 0.3, 1.4}) {
    CHECK(classical.potential(u) == doctest::Approx(cubic_primitive(lambda, u)).epsilon(1e-10));
  }
  LagrangianEvaluator ev(cubic(lambda, 1.0), CharflowConfig{}, QuadratureConfig{});
  for (double u : {-1.0, 0.5, 1.0}) {
    CHECK(std::abs(ev.potential(u) - ev.base_value(u, 0.0)) <= 1e-8);
  }
}

TEST_CASE("momentum phi") {
  LagrangianEvaluator classical(cubic(2.0), CharflowConfig{}, QuadratureConfig{});
  LagrangianEvaluator linear(linear_q(1.0), CharflowConfig{}, QuadratureConfig{});
  for (double u : {-1.0, 0.6}) {
    CHECK(classical.momentum(u, 0.0) == 0.0);
    for (double p : {-2.0, 1.3}) {
      CHECK(classical.momentum(u, p) == doctest::Approx(p).epsilon(1e-12));
      CHECK(linear.momentum(u, p) == doctest::Approx(p * std::exp(u)).epsilon(1e-9));
    }
  }
}

TEST_CASE("Lagrangian examples") {
  const double lambda = 2.0;
  for (auto form : {LagrangianForm::DoubleIntegral, LagrangianForm::Reduced}) {
    LagrangianEvaluator classical(cubic(lambda), CharflowConfig{}, QuadratureConfig{}, form);
    LagrangianEvaluator linear(linear_q(1.0), CharflowConfig{}, QuadratureConfig{}, form);
    // L(u, 0) = -F(u) holds up to the quadrature error of F.
    LagrangianEvaluator general(sine_coupled(2.0), CharflowConfig{}, kFine, form);
    for (double u : {-1.5, 0.2, 1.0}) {
      CHECK(general.lagrangian(u, 0.0) == doctest::Approx(-general.potential(u)).epsilon(1e-8));
      for (double p : {-2.0, 0.7}) {
        CHECK(classical.lagrangian(u, p) ==
              doctest::Approx(0.5 * p * p - cubic_primitive(lambda, u)).epsilon(1e-10));
        CHECK(linear.lagrangian(u, p) ==
              doctest::Approx(0.5 * p * p * std::exp(u)).epsilon(1e-8));
      }
    }
  }
}

TEST_CASE("convexity weight") {
  LagrangianEvaluator classical(cubic(2.0), CharflowConfig{}, QuadratureConfig{});
  LagrangianEvaluator linear(linear_q(1.0), CharflowConfig{}, QuadratureConfig{});
  LagrangianEvaluator general(sine_coupled(3.0), CharflowConfig{}, QuadratureConfig{});
  for (double u : grid(-2.0, 2.0, 5)) {
    for (double p : grid(-3.0, 3.0, 5)) {
      CHECK(classical.convexity_weight(u, p) == 1.0);
      CHECK(linear.convexity_weight(u, p) == doctest::Approx(std::exp(u)).epsilon(1e-9));
      CHECK(general.convexity_weight(u, p) > 0.0);
    }
  }
}

TEST_CASE("effective nonlinearity") {
  const auto one = NonlinearityO2{[](double, double) { return 1.0; },
                                  [](double, double) { return 0.0; }, "1"};
  const auto two = NonlinearityO2{[](double, double) { return 2.0; },
                                  [](double, double) { return 0.0; }, "2"};
  const auto f = cubic(15.0, 0.5);
  const auto same = effective_nonlinearity(f, one);
  const auto halved = effective_nonlinearity(cubic(15.0), two);
  for (double u : {-1.0, 0.3}) {
    for (double q : {0.0, 0.8}) {
      CHECK(same.f_bar(u, q) == f.f_bar(u, q));
      CHECK(same.f_bar_q(u, q) == f.f_bar_q(u, q));
    }
  }
  LagrangianEvaluator ev(halved, CharflowConfig{}, QuadratureConfig{});
  for (double u : {-1.2, 0.5}) {
    for (double p : {0.0, 1.5}) {
      CHECK(ev.lagrangian(u, p) ==
            doctest::Approx(0.5 * p * p - 0.5 * cubic_primitive(15.0, u)).epsilon(1e-9));
    }
  }

  // Quotient rule against finite differences with a q-dependent diffusion.
  const NonlinearityO2 a{[](double u, double q) { return 1.0 + u * u + 0.3 * q; },
                         [](double, double) { return 0.3; }, "a"};
  const auto eff = effective_nonlinearity(sine_coupled(2.0), a);
  for (double u : {-0.7, 0.4}) {
    for (double q : {0.2, 1.1}) CHECK(derivative_mismatch(eff, u, q) <= 1e-5);
  }

  const NonlinearityO2 bad{[](double u, double) { return u; }, [](double, double) { return 0.0; },
                           "u"};
  const auto broken = effective_nonlinearity(f, bad);
  CHECK_THROWS_AS(broken.f_bar(-0.5, 0.0), DomainError);
  CHECK_NOTHROW(broken.f_bar(0.5, 0.0));
}

TEST_CASE("escapes surface as CharacteristicEscape") {
  const NonlinearityO2 riccati{[](double, double q) { return -q * q; },
                               [](double, double q) { return -2.0 * q; }, "riccati"};
  CharflowConfig cfg;
  cfg.escape_bound = 1e6;
  LagrangianEvaluator ev(riccati, cfg, QuadratureConfig{});
  CHECK_THROWS_AS(ev.lagrangian(-2.0, 2.0), CharacteristicEscape);
}

TEST_CASE("property: form equivalence on u in [-2, 2], p in [-3, 3]") {
  const std::vector<NonlinearityO2> cases{cubic(2.0, 1.0), gradient_quadratic(1.0),
                                          sine_coupled(2.0), linear_q(0.5)};
  for (const auto& nl : cases) {
    CAPTURE(nl.label);
    LagrangianEvaluator ev(nl, CharflowConfig{}, kFine);
    double worst = 0.0;
    for (double u : grid(-2.0, 2.0, 9)) {
      for (double p : grid(-3.0, 3.0, 13)) {
        const double a = ev.lagrangian(u, p, LagrangianForm::DoubleIntegral);
        const double b = ev.lagrangian(u, p, LagrangianForm::Reduced);
        worst = std::max(worst, std::abs(a - b) / std::max(1.0, std::abs(a)));
      }
    }
    CHECK(worst <= 1e-6);
  }
}

TEST_CASE("property: evenness in p is exact") {
  for (auto form : {LagrangianForm::DoubleIntegral, LagrangianForm::Reduced}) {
    LagrangianEvaluator ev(sine_coupled(2.0), CharflowConfig{}, QuadratureConfig{}, form);
    for (double u : grid(-1.5, 1.5, 4)) {
      for (double p : grid(0.1, 3.0, 4)) CHECK(ev.lagrangian(u, p) == ev.lagrangian(u, -p));
    }
  }
}

TEST_CASE("property: second p-difference of L matches L_pp") {
  for (const auto& nl : {cubic(2.0, 1.0), sine_coupled(2.0), gradient_quadratic(1.0)}) {
    LagrangianEvaluator ev(nl, tight(), kFine);
    const double h = 1e-3;
    for (double u : grid(-1.5, 1.5, 4)) {
      for (double p : grid(-2.0, 2.0, 5)) {
        const double d2 = (ev.lagrangian(u, p + h) - 2.0 * ev.lagrangian(u, p) +
                           ev.lagrangian(u, p - h)) / (h * h);
        const double lpp = ev.convexity_weight(u, p);
        CHECK(std::abs(d2 - lpp) <= 1e-3 * lpp);
      }
    }
  }
}

TEST_CASE("property: defining PDE L_u - p L_up + fbar L_pp = 0") {
  for (const auto& nl : {cubic(2.0, 1.0), sine_coupled(2.0), gradient_quadratic(1.0)}) {
    CAPTURE(nl.label);
    LagrangianEvaluator ev(nl, tight(), kFine, LagrangianForm::Reduced);
    const double h = 1e-3;
    double worst = 0.0;
    for (double u : grid(-1.0, 1.0, 5)) {
      for (double p : grid(-2.0, 2.0, 5)) {
        const auto L = [&](double uu, double pp) { return ev.lagrangian(uu, pp); };
        const double lu = (L(u + h, p) - L(u - h, p)) / (2 * h);
        const double lup =
            (L(u + h, p + h) - L(u + h, p - h) - L(u - h, p + h) + L(u - h, p - h)) / (4 * h * h);
        const double residual =
            lu - p * lup + nl.f_bar(u, 0.5 * p * p) * ev.convexity_weight(u, p);
        worst = std::max(worst, std::abs(residual));
      }
    }
    CHECK(worst <= 1e-4);
  }
}

TEST_CASE("property: classical reduction to 1e-8") {
  const double lambda = 15.0;
  for (auto form : {LagrangianForm::DoubleIntegral, LagrangianForm::Reduced}) {
    LagrangianEvaluator ev(cubic(lambda), CharflowConfig{}, QuadratureConfig{}, form);
    for (double u : grid(-2.0, 2.0, 9)) {
      for (double p : grid(-3.0, 3.0, 7)) {
        CHECK(std::abs(ev.lagrangian(u, p) - (0.5 * p * p - cubic_primitive(lambda, u))) <= 1e-8);
      }
    }
  }
}

TEST_CASE("cache does not change results") {
  LagrangianEvaluator ev(sine_coupled(2.0), CharflowConfig{}, QuadratureConfig{});
  const double first = ev.lagrangian(0.7, 1.3);
  const double cached = ev.lagrangian(0.7, 1.3);
  ev.clear_cache();
  CHECK(first == cached);
  CHECK(ev.lagrangian(0.7, 1.3) == first);
}

}  // TEST_SUITE
