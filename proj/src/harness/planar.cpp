#include "o2lyap/planar.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "o2lyap/errors.hpp"
#include "o2lyap/ode.hpp"

namespace o2lyap {

namespace {

std::array<double, 4> jacobian_of(const PlanarField& pf, double a, double b) {
  if (pf.jacobian) return pf.jacobian(a, b);
  const double ha = 1e-6 * std::max(1.0, std::abs(a));
  const double hb = 1e-6 * std::max(1.0, std::abs(b));
  return {(pf.g(a + ha, b) - pf.g(a - ha, b)) / (2 * ha),
          (pf.g(a, b + hb) - pf.g(a, b - hb)) / (2 * hb),
          (pf.h(a + ha, b) - pf.h(a - ha, b)) / (2 * ha),
          (pf.h(a, b + hb) - pf.h(a, b - hb)) / (2 * hb)};
}

ode::Tolerances planar_tolerances(double rel_tol) { return {rel_tol, rel_tol * 1e-2, 10'000'000}; }

}  // namespace

PlanarField center_field() {
  PlanarField pf;
  pf.g = [](double, double b) { return 0.5 * (1.0 - b * b); };
  pf.h = [](double a, double b) { return a * b; };
  pf.jacobian = [](double a, double b) -> std::array<double, 4> { return {0.0, -b, b, a}; };
  return pf;
}

double center_energy(double a, double b) {
  return 0.5 * a * a + 0.25 * b * b - 0.5 * std::log(b);
}

double reflection_symmetry_defect(const PlanarField& pf, int samples, double radius) {
  std::mt19937_64 rng(20140423);
  std::uniform_real_distribution<double> dist(-radius, radius);
  double worst = 0.0;
  for (int i = 0; i < samples; ++i) {
    const double a = dist(rng);
    const double b = dist(rng);
    worst = std::max(worst, std::abs(pf.g(a, -b) - pf.g(a, b)));
    worst = std::max(worst, std::abs(pf.h(a, -b) + pf.h(a, b)));
  }
  return worst;
}

GeneralNonlinearity embed_planar(const PlanarField& pf) {
  if (!pf.g || !pf.h) throw ConfigError("embed_planar: empty planar field");
  const double defect = reflection_symmetry_defect(pf);
  if (!(defect <= 1e-12)) {
    std::ostringstream os;
    os << "embed_planar: planar field is not reflection symmetric (defect " << defect << ")";
    throw ConfigError(os.str());
  }
  GeneralNonlinearity nl;
  nl.x_periodic = true;
  nl.label = "planar-embedding";
  nl.f = [pf](double x, double u, double p) {
    const double c = std::cos(x), s = std::sin(x);
    const double A = u * c - p * s;
    const double B = u * s + p * c;
    return (A + pf.g(A, B)) * c + (B + pf.h(A, B)) * s;
  };
  nl.f_p = [pf](double x, double u, double p) {
    const double c = std::cos(x), s = std::sin(x);
    const double A = u * c - p * s;
    const double B = u * s + p * c;
    const auto [ga, gb, ha, hb] = jacobian_of(pf, A, B);
    // dA/dp = -s, dB/dp = c; the identity part contributes -s c + c s = 0.
    return -ga * s * c + gb * c * c - ha * s * s + hb * s * c;
  };
  return nl;
}

PlanarOrbit integrate_planar(const PlanarField& pf, double a0, double b0,
                             const std::vector<double>& times, double rel_tol) {
  const auto rhs = [&pf](double, const ode::State<2>& y) -> ode::State<2> {
    return {pf.g(y[0], y[1]), pf.h(y[0], y[1])};
  };
  PlanarOrbit orbit;
  ode::State<2> y{a0, b0};
  double t = 0.0;
  for (double target : times) {
    const auto sol = ode::integrate<2>(rhs, t, y, target, planar_tolerances(rel_tol));
    if (sol.outcome != ode::Outcome::Completed) {
      throw IntegrationFailure("integrate_planar: planar flow integration failed", sol.t);
    }
    y = sol.y;
    t = target;
    orbit.times.push_back(t);
    orbit.a.push_back(y[0]);
    orbit.b.push_back(y[1]);
  }
  return orbit;
}

double planar_period(const PlanarField& pf, double a0, double b0, double center_a,
                     double center_b, double t_max) {
  const auto rhs = [&pf](double, const ode::State<2>& y) -> ode::State<2> {
    return {pf.g(y[0], y[1]), pf.h(y[0], y[1])};
  };
  const auto tol = planar_tolerances(1e-13);
  const auto angle = [&](const ode::State<2>& y) {
    return std::atan2(y[1] - center_b, y[0] - center_a);
  };
  const auto advance = [&](double t0, const ode::State<2>& y0, double t1) {
    const auto sol = ode::integrate<2>(rhs, t0, y0, t1, tol);
    if (sol.outcome != ode::Outcome::Completed) {
      throw IntegrationFailure("planar_period: planar flow integration failed", sol.t);
    }
    return sol.y;
  };

  constexpr double two_pi = 2.0 * std::numbers::pi;
  const double chunk = 1e-2;
  ode::State<2> y{a0, b0};
  double t = 0.0;
  double turned = 0.0;
  double last = angle(y);
  while (t < t_max) {
    const auto next = advance(t, y, t + chunk);
    double d = angle(next) - last;
    if (d > std::numbers::pi) d -= two_pi;
    if (d < -std::numbers::pi) d += two_pi;
    if (std::abs(turned + d) >= two_pi) {
      // Bisect inside the chunk on the accumulated turn.
      double lo = t, hi = t + chunk;
      for (int it = 0; it < 60; ++it) {
        const double mid = 0.5 * (lo + hi);
        const auto ym = advance(t, y, mid);
        double dm = angle(ym) - last;
        if (dm > std::numbers::pi) dm -= two_pi;
        if (dm < -std::numbers::pi) dm += two_pi;
        (std::abs(turned + dm) >= two_pi ? hi : lo) = mid;
      }
      return 0.5 * (lo + hi);
    }
    turned += d;
    last = angle(next);
    y = next;
    t += chunk;
  }
  throw IntegrationFailure("planar_period: orbit did not close", t);
}

}  // namespace o2lyap
