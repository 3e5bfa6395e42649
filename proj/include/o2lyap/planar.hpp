#pragma once

// Realisation of a reflection-symmetric planar flow  a' = g(a, b), b' = h(a, b)
// inside u_t = u_xx + f(x, u, u_x) on the circle of length 2 pi, on the
// invariant plane u = a cos x + b sin x.

#include <functional>
#include <optional>
#include <vector>

#include "o2lyap/charflow.hpp"
#include "o2lyap/pde.hpp"

namespace o2lyap {

struct PlanarField {
  std::function<double(double a, double b)> g;
  std::function<double(double a, double b)> h;
  /// Partials (g_a, g_b, h_a, h_b); finite differences are used when absent.
  std::function<std::array<double, 4>(double a, double b)> jacobian;
};

/// The fixed counterexample field g = (1 - b^2) / 2, h = a b, with a centre at (0, 1).
PlanarField center_field();

/// Largest violation of g(a,-b) = g(a,b), h(a,-b) = -h(a,b) over `samples`
/// pseudo-random points in [-radius, radius]^2 (fixed seed).
double reflection_symmetry_defect(const PlanarField& pf, int samples = 1000, double radius = 3.0);

/// f(x, u, p) = (A + g(A, B)) cos x + (B + h(A, B)) sin x with
/// A = u cos x - p sin x, B = u sin x + p cos x. Satisfies f(-x, u, -p) = f(x, u, p).
/// Throws ConfigError when the field is not reflection symmetric to 1e-12.
GeneralNonlinearity embed_planar(const PlanarField& pf);

/// Conserved quantity of the centre field in b > 0:
///   H = a^2 / 2 + b^2 / 4 - ln(b) / 2.
double center_energy(double a, double b);

struct PlanarOrbit {
  std::vector<double> times;
  std::vector<double> a;
  std::vector<double> b;
};

/// Integrates the planar flow and samples it at the given increasing times.
PlanarOrbit integrate_planar(const PlanarField& pf, double a0, double b0,
                             const std::vector<double>& times, double rel_tol = 1e-12);

/// Period of the closed orbit through (a0, b0) around `center`, from the time
/// the polar angle about the centre first completes a full turn.
double planar_period(const PlanarField& pf, double a0, double b0, double center_a,
                     double center_b, double t_max = 100.0);

}  // namespace o2lyap
