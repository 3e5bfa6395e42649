#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

namespace o2lyap {

enum class BoundaryCondition { Periodic, Dirichlet, Neumann };

/// Samples of u on a uniform grid.
///   Periodic:           x_i = i * length / n,        i = 0..n-1
///   Dirichlet/Neumann:  x_i = i * length / (n - 1),  both ends included
struct ScalarField {
  std::vector<double> values;
  double domain_length = 1.0;
  BoundaryCondition bc = BoundaryCondition::Periodic;

  static constexpr std::size_t kMinPoints = 8;

  std::size_t size() const { return values.size(); }
  double spacing() const;
  double x(std::size_t i) const { return spacing() * static_cast<double>(i); }

  /// Checks the grid size and length. Dirichlet end values are checked only
  /// when `state` is true (derived fields such as u_x do not vanish there).
  void validate(bool state = false) const;

  /// Same grid, new values.
  ScalarField with_values(std::vector<double> v) const { return {std::move(v), domain_length, bc}; }
};

/// u_x by second-order central differences; wrap-around on the circle,
/// one-sided second-order stencils at interval ends.
ScalarField gradient(const ScalarField& field);

/// Grid quadrature of samples laid out like `grid`: rectangle rule on the
/// circle, trapezoid rule on intervals.
double grid_integral(const ScalarField& grid, std::span<const double> samples);

/// Maximum absolute value.
double max_abs(std::span<const double> v);

}  // namespace o2lyap
