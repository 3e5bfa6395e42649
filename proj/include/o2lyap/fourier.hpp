#pragma once

#include <utility>

#include "o2lyap/field.hpp"

namespace o2lyap {

/// (a, b) = (1/pi) * (int u cos(m x) dx, int u sin(m x) dx) by the rectangle
/// rule. Requires a periodic field on a circle of length 2 pi and mode >= 1.
std::pair<double, double> fourier_project(const ScalarField& field, int mode);

/// max_i |u_i - (a cos(m x_i) + b sin(m x_i))| for the projection above: the
/// distance of the field from the span of the m-th Fourier pair.
double off_mode_residual(const ScalarField& field, int mode);

}  // namespace o2lyap
