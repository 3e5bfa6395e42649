#pragma once

// Named generators for initial data.

#include <cstdint>
#include <string>
#include <vector>

#include "o2lyap/field.hpp"

namespace o2lyap {

enum class InitialKind {
  /// Explicit combination of Fourier modes.
  FourierMix,
  /// Truncated Fourier series with N(0, 1) coefficients scaled by k^-decay.
  RandomSmooth,
  /// Snapshot taken from the snapshot file of an earlier run.
  Import
};

struct FourierTerm {
  int mode = 1;
  double cos_amp = 0.0;
  double sin_amp = 0.0;
  bool operator==(const FourierTerm&) const = default;
};

/// Basis per boundary condition, with L the domain length:
///   Periodic   cos(2 pi k x / L), sin(2 pi k x / L)
///   Dirichlet  sin(pi k x / L)          (cos_amp and offset must be 0)
///   Neumann    cos(pi k x / L)          (sin_amp must be 0)
struct InitialCondition {
  InitialKind kind = InitialKind::RandomSmooth;
  double offset = 0.0;
  std::vector<FourierTerm> terms;

  std::uint64_t seed = 1;
  int modes = 4;
  double amplitude = 1.0;
  double decay = 2.0;
  /// Dirichlet only: multiply by sin(pi x / L)^taper so that the data meet
  /// the boundary compatibility conditions to higher order.
  int taper = 0;

  /// Import: snapshot file and time (negative selects the last snapshot).
  std::string path;
  double import_time = -1.0;

  void validate(BoundaryCondition bc) const;
  bool operator==(const InitialCondition&) const = default;
};

/// Samples the initial condition on an n-point grid. Dirichlet end values are
/// set to 0 exactly.
/// Throws ConfigError on inconsistent settings or a mismatching import.
ScalarField make_initial(const InitialCondition& ic, int n, double length, BoundaryCondition bc);

}  // namespace o2lyap
