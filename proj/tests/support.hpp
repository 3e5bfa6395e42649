#pragma once

// Shared nonlinearities and helpers for the unit tests.

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "o2lyap/charflow.hpp"
#include "o2lyap/field.hpp"

namespace o2lyap::testing {

inline NonlinearityO2 zero_field() {
  return {[](double, double) { return 0.0; }, [](double, double) { return 0.0; }, "zero"};
}

/// fbar = b q.
inline NonlinearityO2 linear_q(double b) {
  return {[b](double, double q) { return b * q; }, [b](double, double) { return b; }, "bq"};
}

/// fbar = lambda u (1 - u^2) + c q u.
inline NonlinearityO2 cubic(double lambda, double c = 0.0) {
  return {[=](double u, double q) { return lambda * u * (1.0 - u * u) + c * q * u; },
          [=](double u, double) { return c * u; }, "cubic"};
}

/// fbar = -u + b q (a(u) + b(u) q with a = -u).
inline NonlinearityO2 gradient_quadratic(double b) {
  return {[b](double u, double q) { return -u + b * q; }, [b](double, double) { return b; },
          "gq"};
}

/// fbar = lambda u (1 - u^2) + 0.5 u sin q: nonlinear in q.
inline NonlinearityO2 sine_coupled(double lambda) {
  return {[=](double u, double q) { return lambda * u * (1.0 - u * u) + 0.5 * u * std::sin(q); },
          [](double u, double q) { return 0.5 * u * std::cos(q); }, "sine"};
}

/// Primitive of lambda u (1 - u^2).
inline double cubic_primitive(double lambda, double u) {
  return lambda * (0.5 * u * u - 0.25 * u * u * u * u);
}

inline ScalarField periodic_field(std::size_t n, double length, double (*fn)(double)) {
  ScalarField f;
  f.domain_length = length;
  f.values.resize(n);
  for (std::size_t i = 0; i < n; ++i) f.values[i] = fn(f.x(i));
  return f;
}

/// Largest relative mismatch between f_bar_q and a central difference of f_bar.
inline double derivative_mismatch(const NonlinearityO2& nl, double u, double q) {
  const double h = 1e-6 * std::max(1.0, std::abs(q));
  const double fd = (nl.f_bar(u, q + h) - nl.f_bar(u, q - h)) / (2.0 * h);
  return std::abs(fd - nl.f_bar_q(u, q)) / std::max(1.0, std::abs(fd));
}

}  // namespace o2lyap::testing
