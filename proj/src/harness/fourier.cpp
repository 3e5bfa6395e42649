#include "o2lyap/fourier.hpp"

#include <cmath>
#include <numbers>

#include "o2lyap/errors.hpp"

namespace o2lyap {

namespace {

void require_circle(const ScalarField& field, int mode) {
  field.validate();
  if (field.bc != BoundaryCondition::Periodic) {
    throw ConfigError("fourier_project: field must be periodic");
  }
  if (std::abs(field.domain_length - 2.0 * std::numbers::pi) > 1e-12) {
    throw ConfigError("fourier_project: field must live on a circle of length 2 pi");
  }
  if (mode < 1) throw ConfigError("fourier_project: mode must be >= 1");
}

}  // namespace

std::pair<double, double> fourier_project(const ScalarField& field, int mode) {
  require_circle(field, mode);
  const std::size_t n = field.size();
  double a = 0.0, b = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double x = field.x(i);
    a += field.values[i] * std::cos(mode * x);
    b += field.values[i] * std::sin(mode * x);
  }
  const double scale = 2.0 / static_cast<double>(n);
  return {scale * a, scale * b};
}

double off_mode_residual(const ScalarField& field, int mode) {
  const auto [a, b] = fourier_project(field, mode);
  double worst = 0.0;
  for (std::size_t i = 0; i < field.size(); ++i) {
    const double x = field.x(i);
    worst = std::max(worst, std::abs(field.values[i] - a * std::cos(mode * x) -
                                     b * std::sin(mode * x)));
  }
  return worst;
}

}  // namespace o2lyap
