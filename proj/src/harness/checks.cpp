#include "o2lyap/checks.hpp"

#include <cmath>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>

#include "o2lyap/charflow.hpp"
#include "o2lyap/fourier.hpp"
#include "o2lyap/lagrangian.hpp"
#include "o2lyap/matano.hpp"
#include "o2lyap/planar.hpp"
#include "o2lyap/scenario.hpp"

namespace o2lyap {

namespace {

NonlinearityO2 cubic_with_q(double lambda, double c) {
  return {[=](double u, double q) { return lambda * u * (1.0 - u * u) + c * q * u; },
          [=](double u, double) { return c * u; }, "cubic+qu"};
}

// A check computes a measured value; it passes when value <= threshold.
CheckResult measure(const std::string& name, double threshold,
                    const std::function<double()>& body) {
  CheckResult r{name, false, {}};
  std::ostringstream os;
  try {
    const double v = body();
    r.passed = v <= threshold;
    os << "measured " << v << ", limit " << threshold;
  } catch (const std::exception& e) {
    os << "error: " << e.what();
  }
  r.detail = os.str();
  return r;
}

}  // namespace

std::vector<CheckResult> run_checks() {
  const CharflowConfig cf;
  std::vector<CheckResult> out;

  out.push_back(measure("charflow identity", 0.0, [&] {
    const auto r = evolve(cubic_with_q(2.0, 1.0), 0.7, 0.7, 0.3, cf);
    return std::abs(r.value - 0.3) + std::abs(r.sensitivity - 1.0);
  }));

  out.push_back(measure("charflow linear closed form", 1e-8, [&] {
    const NonlinearityO2 lin{[](double, double q) { return q; }, [](double, double) { return 1.0; },
                             "q"};
    double worst = 0.0;
    for (double u : {-1.5, 0.4, 2.0}) {
      const auto r = evolve(lin, u, 0.0, 0.8, cf);
      worst = std::max({worst, std::abs(r.value - 0.8 * std::exp(u)),
                        std::abs(r.sensitivity - std::exp(u))});
    }
    return worst;
  }));

  out.push_back(measure("charflow composition and inverse (200 cases)", 1.0, [&] {
    const auto nl = cubic_with_q(2.0, 0.5);
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> U(-1.0, 1.0), Q(-0.5, 1.0);
    double worst = 0.0;  // in units of 10 rel_tol max(1, |value|)
    for (int i = 0; i < 200; ++i) {
      const double u0 = U(rng), u1 = U(rng), u2 = U(rng), q0 = Q(rng);
      const auto [chained, direct] = compose_check(nl, u0, u1, u2, q0, cf);
      const double back = evolve(nl, u1, u0, evolve(nl, u0, u1, q0, cf).value, cf).value;
      const double scale = 10.0 * cf.rel_tol;
      worst = std::max({worst, std::abs(chained - direct) / (scale * std::max(1.0, std::abs(direct))),
                        std::abs(back - q0) / (scale * std::max(1.0, std::abs(q0)))});
    }
    return worst;
  }));

  out.push_back(measure("Lagrangian form equivalence", 1e-6, [&] {
    QuadratureConfig qc{QuadratureRule::GaussLegendre, 16, 16};
    LagrangianEvaluator ev(cubic_with_q(2.0, 1.0), cf, qc);
    double worst = 0.0;
    for (double u : {-1.0, 0.0, 0.6}) {
      for (double p : {-2.0, 0.5, 1.5}) {
        const double a = ev.lagrangian(u, p, LagrangianForm::DoubleIntegral);
        const double b = ev.lagrangian(u, p, LagrangianForm::Reduced);
        worst = std::max(worst, std::abs(a - b) / std::max(1.0, std::abs(a)));
      }
    }
    return worst;
  }));

  out.push_back(measure("exp E = Psi_q and F = Psi(0)", 1e-6, [&] {
    LagrangianEvaluator ev(cubic_with_q(2.0, 1.0), cf, QuadratureConfig{});
    double worst = 0.0;
    for (double u : {-1.0, 0.5, 1.0}) {
      worst = std::max(worst, std::abs(ev.potential(u) - ev.base_value(u, 0.0)));
      for (double q : {0.0, 0.7}) {
        worst = std::max(worst, std::abs(std::exp(ev.metric_exponent(u, q)) -
                                         ev.base_sensitivity(u, q)));
      }
    }
    return worst;
  }));

  out.push_back(measure("classical reduction", 1e-8, [&] {
    const double lambda = 2.0;
    LagrangianEvaluator ev(cubic_with_q(lambda, 0.0), cf, QuadratureConfig{});
    double worst = 0.0;
    for (double u : {-2.0, -0.5, 1.0, 2.0}) {
      for (double p : {-3.0, 0.0, 1.0, 3.0}) {
        const double classical = 0.5 * p * p - lambda * (0.5 * u * u - 0.25 * u * u * u * u);
        worst = std::max(worst, std::abs(ev.lagrangian(u, p) - classical));
      }
    }
    return worst;
  }));

  out.push_back(measure("planar embedding reflection symmetry", 1e-12, [&] {
    const auto f = embed_planar(center_field());
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> X(-3.0, 3.0);
    double worst = 0.0;
    for (int i = 0; i < 100; ++i) {
      const double x = X(rng), u = X(rng), p = X(rng);
      worst = std::max(worst, std::abs(f.f(-x, u, -p) - f.f(x, u, p)));
    }
    return worst;
  }));

  out.push_back(measure("Fourier projection", 1e-12, [&] {
    ScalarField field;
    field.domain_length = 2.0 * std::numbers::pi;
    field.values.resize(64);
    for (std::size_t i = 0; i < 64; ++i) {
      const double x = field.x(i);
      field.values[i] = 2.0 * std::sin(x) + std::cos(2.0 * x);
    }
    const auto [a1, b1] = fourier_project(field, 1);
    const auto [a2, b2] = fourier_project(field, 2);
    return std::max({std::abs(a1), std::abs(b1 - 2.0), std::abs(a2 - 1.0), std::abs(b2)});
  }));

  out.push_back(measure("separated exponent g = epsilon x", 1e-8, [&] {
    const double eps = 0.5;
    const GeneralNonlinearity nl{[=](double, double u, double p) { return 5.0 * u * (1 - u * u) + eps * p; },
                                 [=](double, double, double) { return eps; }, false, "f0+eps p"};
    double worst = 0.0;
    for (double x : {0.25, 0.5, 1.0}) {
      worst = std::max(worst, std::abs(trace_to_origin(nl, x, 0.1, 0.2, cf).g - eps * x));
    }
    return worst;
  }));

  out.push_back(measure("integrability defect of a damped centre", 1e-6, [&] {
    const double eps = 0.3, w2 = 4.0 * std::numbers::pi * std::numbers::pi;
    const GeneralNonlinearity nl{[=](double, double u, double p) { return w2 * u + eps * p; },
                                 [=](double, double, double) { return eps; }, true, "centre"};
    return std::abs(integrability_defect(nl, 0.1, 0.1, cf).defect - eps);
  }));

  out.push_back(measure("config round trip", 0.0, [&] {
    double mismatches = 0.0;
    for (Scenario s : all_scenarios()) {
      const ScenarioConfig c = default_config(s);
      if (!(parse_config(emit_config(c)) == c)) mismatches += 1.0;
    }
    return mismatches;
  }));

  return out;
}

}  // namespace o2lyap
