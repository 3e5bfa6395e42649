#pragma once

// Method-of-lines solver for  u_t = a(x, u, u_x) u_xx + f(x, u, u_x)
// on a circle or an interval.

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "o2lyap/charflow.hpp"
#include "o2lyap/field.hpp"
#include "o2lyap/functional.hpp"

namespace o2lyap {

using PointFunction = std::function<double(double x, double u, double p)>;

/// f(x, u, p) with its p-derivative.
struct GeneralNonlinearity {
  PointFunction f;
  PointFunction f_p;
  bool x_periodic = false;
  std::string label;
};

/// f(u, p) = fbar(u, p^2 / 2), f_p = p fbar_q.
GeneralNonlinearity from_o2(const NonlinearityO2& nl);

enum class Scheme {
  RK4Explicit,
  /// Second-order semi-implicit BDF: diffusion implicit, the rest explicit.
  /// Requires a constant diffusion coefficient.
  IMEXDiffusion
};

struct SolverConfig {
  int n = 256;
  /// Time step; 0 selects 0.4 h^2 / a_max.
  double dt = 0.0;
  double t_end = 1.0;
  int save_every = 100;
  Scheme scheme = Scheme::RK4Explicit;
  /// Constant diffusion coefficient used by the IMEX scheme and the default
  /// step; a callable coefficient passed to integrate() overrides it for RK4.
  double diffusion = 1.0;

  void validate() const;
  bool operator==(const SolverConfig&) const = default;
};

enum class RunStatus { Completed, BlowUp };

struct TrajectoryRecord {
  std::vector<double> times;
  std::vector<ScalarField> snapshots;
  std::vector<ScalarField> u_t_snapshots;
  std::vector<FunctionalReport> reports;  // filled by monitors
  RunStatus status = RunStatus::Completed;
  double blowup_time = 0.0;
  std::vector<std::string> warnings;
};

/// Semi-discrete right-hand side. Central second-order stencils; ghost values
/// u = 0 (Dirichlet) or u_x = 0 (Neumann) at interval ends, where the Dirichlet
/// entries of the result are 0.
/// Throws NonFiniteState with the first offending grid index.
ScalarField rhs(const GeneralNonlinearity& nl, const std::optional<PointFunction>& a,
                const ScalarField& field);

/// Advances u0 to cfg.t_end. The step count is ceil(t_end / dt) with dt shrunk
/// so the run lands exactly on t_end. Snapshots (and their right-hand sides)
/// are stored at t = 0, every save_every steps, and at the final time.
/// Blow-up (max|u| > 1e6 or a non-finite state) ends the run early with
/// status BlowUp; the partial trajectory is kept.
TrajectoryRecord integrate(const GeneralNonlinearity& nl, const std::optional<PointFunction>& a,
                           const ScalarField& u0, const SolverConfig& cfg);

/// 0.4 h^2 / a_max.
double default_time_step(const ScalarField& grid, double a_max = 1.0);

}  // namespace o2lyap
