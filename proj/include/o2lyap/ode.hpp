#pragma once

// Adaptive Dormand-Prince 5(4) integrator for small fixed-size systems.
//
// Used for every scalar/low-dimensional ODE in the library: characteristic
// curves, their variational equations, equilibrium profiles, planar flows and
// shooting maps. States are std::array so each solve stays allocation free.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <utility>

namespace o2lyap::ode {

struct Tolerances {
  double rel_tol = 1e-10;
  double abs_tol = 1e-12;
  long max_steps = 1'000'000;
};

enum class Outcome { Completed, Escaped, StepLimit, NonFinite };

template <std::size_t N>
using State = std::array<double, N>;

template <std::size_t N>
struct Solution {
  State<N> y{};
  double t = 0.0;  // last accepted abscissa
  Outcome outcome = Outcome::Completed;
  long steps = 0;
};

namespace detail {

template <std::size_t N>
bool all_finite(const State<N>& y) {
  return std::all_of(y.begin(), y.end(), [](double v) { return std::isfinite(v); });
}

template <std::size_t N>
double error_norm(const State<N>& err, const State<N>& y0, const State<N>& y1,
                  const Tolerances& tol) {
  double acc = 0.0;
  for (std::size_t i = 0; i < N; ++i) {
    const double sc = tol.abs_tol + tol.rel_tol * std::max(std::abs(y0[i]), std::abs(y1[i]));
    const double r = err[i] / sc;
    acc += r * r;
  }
  return std::sqrt(acc / static_cast<double>(N));
}

// Hairer-Norsett-Wanner starting step heuristic (order 5).
template <std::size_t N, class Rhs>
double initial_step(Rhs& rhs, double t0, const State<N>& y0, const State<N>& f0,
                    double span, const Tolerances& tol) {
  double d0 = 0.0, d1 = 0.0;
  for (std::size_t i = 0; i < N; ++i) {
    const double sc = tol.abs_tol + tol.rel_tol * std::abs(y0[i]);
    d0 += (y0[i] / sc) * (y0[i] / sc);
    d1 += (f0[i] / sc) * (f0[i] / sc);
  }
  d0 = std::sqrt(d0 / N);
  d1 = std::sqrt(d1 / N);
  double h0 = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * d0 / d1;
  h0 = std::min(h0, std::abs(span));
  const double dir = span > 0 ? 1.0 : -1.0;
  State<N> y1;
  for (std::size_t i = 0; i < N; ++i) y1[i] = y0[i] + dir * h0 * f0[i];
  const State<N> f1 = rhs(t0 + dir * h0, y1);
  double d2 = 0.0;
  for (std::size_t i = 0; i < N; ++i) {
    const double sc = tol.abs_tol + tol.rel_tol * std::abs(y0[i]);
    const double r = (f1[i] - f0[i]) / sc;
    d2 += r * r;
  }
  d2 = std::sqrt(d2 / N) / h0;
  const double dmax = std::max(d1, d2);
  const double h1 = dmax <= 1e-15 ? std::max(1e-6, h0 * 1e-3) : std::pow(0.01 / dmax, 0.2);
  double h = std::min(100.0 * h0, h1);
  if (!std::isfinite(h) || h <= 0.0) h = h0;
  return std::min(h, std::abs(span));
}

}  // namespace detail

/// Integrates y' = rhs(t, y) from t0 to t1 (either direction).
///
/// `escaped(y)` is checked after every accepted step; returning true stops the
/// integration with Outcome::Escaped at the current abscissa.
template <std::size_t N, class Rhs, class Guard>
Solution<N> integrate(Rhs&& rhs, double t0, const State<N>& y0, double t1,
                      const Tolerances& tol, Guard&& escaped) {
  // Dormand-Prince tableau.
  constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
  constexpr double a21 = 1.0 / 5;
  constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                   a54 = -212.0 / 729;
  constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                   a64 = 49.0 / 176, a65 = -5103.0 / 18656;
  constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                   b6 = 11.0 / 84;
  constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                   e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;
  // PI controller exponents.
  constexpr double beta = 0.04;
  constexpr double alpha = 0.2 - 0.75 * beta;

  Solution<N> sol;
  sol.y = y0;
  sol.t = t0;
  const double span = t1 - t0;
  if (span == 0.0) return sol;
  const double dir = span > 0 ? 1.0 : -1.0;

  State<N> k1 = rhs(t0, y0);
  if (!detail::all_finite(k1)) {
    sol.outcome = Outcome::NonFinite;
    return sol;
  }
  double h = detail::initial_step<N>(rhs, t0, y0, k1, span, tol);
  double err_prev = 1e-4;
  double t = t0;
  State<N> y = y0;
  State<N> tmp, k2, k3, k4, k5, k6, k7, y5, err;
  bool rejected_last = false;

  while (true) {
    if (sol.steps >= tol.max_steps) {
      sol.outcome = Outcome::StepLimit;
      break;
    }
    const double remaining = std::abs(t1 - t);
    bool last = false;
    if (h >= remaining) {
      h = remaining;
      last = true;
    }
    const double hs = dir * h;

    for (std::size_t i = 0; i < N; ++i) tmp[i] = y[i] + hs * a21 * k1[i];
    k2 = rhs(t + c2 * hs, tmp);
    for (std::size_t i = 0; i < N; ++i) tmp[i] = y[i] + hs * (a31 * k1[i] + a32 * k2[i]);
    k3 = rhs(t + c3 * hs, tmp);
    for (std::size_t i = 0; i < N; ++i)
      tmp[i] = y[i] + hs * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
    k4 = rhs(t + c4 * hs, tmp);
    for (std::size_t i = 0; i < N; ++i)
      tmp[i] = y[i] + hs * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
    k5 = rhs(t + c5 * hs, tmp);
    for (std::size_t i = 0; i < N; ++i)
      tmp[i] =
          y[i] + hs * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] + a65 * k5[i]);
    k6 = rhs(t + hs, tmp);
    for (std::size_t i = 0; i < N; ++i)
      y5[i] = y[i] + hs * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] + b5 * k5[i] + b6 * k6[i]);
    const double t_new = last ? t1 : t + hs;
    k7 = rhs(t_new, y5);
    for (std::size_t i = 0; i < N; ++i)
      err[i] = hs * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] +
                     e7 * k7[i]);
    ++sol.steps;

    const double en = detail::error_norm<N>(err, y, y5, tol);
    if (!std::isfinite(en) || !detail::all_finite(y5) || !detail::all_finite(k7)) {
      h *= 0.25;
      rejected_last = true;
      if (h < 1e-14 * std::max(1.0, std::abs(t))) {
        sol.outcome = Outcome::NonFinite;
        break;
      }
      continue;
    }
    if (en <= 1.0) {
      t = t_new;
      y = y5;
      k1 = k7;
      sol.t = t;
      sol.y = y;
      if (escaped(y)) {
        sol.outcome = Outcome::Escaped;
        break;
      }
      if (last) {
        sol.outcome = Outcome::Completed;
        break;
      }
      double fac = 0.9 * std::pow(std::max(en, 1e-10), -alpha) * std::pow(err_prev, beta);
      fac = std::clamp(fac, 0.2, rejected_last ? 1.0 : 5.0);
      h *= fac;
      err_prev = std::max(en, 1e-4);
      rejected_last = false;
    } else {
      h *= std::max(0.2, 0.9 * std::pow(en, -alpha));
      rejected_last = true;
    }
  }
  return sol;
}

template <std::size_t N, class Rhs>
Solution<N> integrate(Rhs&& rhs, double t0, const State<N>& y0, double t1,
                      const Tolerances& tol) {
  return integrate<N>(std::forward<Rhs>(rhs), t0, y0, t1, tol,
                      [](const State<N>&) { return false; });
}

}  // namespace o2lyap::ode
