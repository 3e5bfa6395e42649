#pragma once

// Scenario registry: configuration, JSON round trip, and the runner that
// integrates the PDE and monitors the appropriate Lyapunov construction.

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "o2lyap/charflow.hpp"
#include "o2lyap/initial.hpp"
#include "o2lyap/lagrangian.hpp"
#include "o2lyap/pde.hpp"
#include "o2lyap/quadrature.hpp"

namespace o2lyap {

enum class Scenario {
  Classical,
  ChafeeInfante,
  FrozenWave,
  RotatingWave,
  QLinear,
  GradientQuadratic,
  PlanarEmbedding,
  MatanoSeparated
};

std::string_view scenario_name(Scenario s);
/// Throws ConfigError for unknown names.
Scenario scenario_from_name(std::string_view name);
std::vector<Scenario> all_scenarios();
/// One-line description used by list-scenarios.
std::string_view scenario_summary(Scenario s);

/// Nonlinearity parameters. Which ones matter depends on the scenario:
///   Classical, ChafeeInfante, FrozenWave  fbar = lambda u (1 - u^2)
///   RotatingWave       f = lambda u (1 - u^2) - c p
///   QLinear            u_t = a_bar u_xx + lambda u (1 - u^2) + kappa q u
///   GradientQuadratic  fbar = -u + b q
///   PlanarEmbedding    centre field g = (1 - b^2)/2, h = a b; `periods` periods
///   MatanoSeparated    f = lambda u (1 - u^2) + epsilon p
struct ScenarioParams {
  double lambda = 15.0;
  double c = 1.0;
  double epsilon = 0.5;
  double b = 1.0;
  double kappa = 0.5;
  double a_bar = 2.0;
  /// RotatingWave: the initial data are first relaxed for this long under c = 0.
  double relax_time = 0.0;
  double periods = 1.0;
  bool operator==(const ScenarioParams&) const = default;
};

struct ScenarioConfig {
  Scenario scenario = Scenario::ChafeeInfante;
  ScenarioParams params;
  double domain_length = 1.0;
  BoundaryCondition bc = BoundaryCondition::Periodic;
  InitialCondition initial;
  SolverConfig solver;
  QuadratureConfig quadrature;
  CharflowConfig charflow;
  LagrangianForm form = LagrangianForm::Reduced;
  /// Run directory relative to the output root.
  std::string output_path;

  /// Throws ConfigError when a setting is out of range for the scenario.
  void validate() const;
  bool operator==(const ScenarioConfig&) const = default;
};

/// Reasonable settings for each scenario; output_path is the scenario name.
ScenarioConfig default_config(Scenario s);

/// JSON text of the full configuration (every field, stable key order).
std::string emit_config(const ScenarioConfig& cfg);
/// Parses JSON text; absent keys keep their defaults, unknown keys are errors.
/// Throws ConfigError.
ScenarioConfig parse_config(std::string_view json_text);
ScenarioConfig load_config(const std::string& path);

/// Replaces the value at a dotted key path (e.g. "params.lambda",
/// "solver.n") by `value`, parsed according to the current value's type.
ScenarioConfig with_parameter(const ScenarioConfig& cfg, const std::string& key,
                              const std::string& value);

enum class ExitCode : int { Ok = 0, Failure = 1, BlowUp = 2, ConstructionFailure = 3 };

/// Monitor output, one entry per save of the trajectory.
struct MonitorSeries {
  std::vector<double> V;
  std::vector<double> dissipation;
  /// |dV/dt + dissipation|; NaN at the first and last save.
  std::vector<double> residual;
  std::vector<double> convexity_min;
  std::vector<double> ut_inf;
  /// Fourier pair (a, b) of mode 1 (circle of length 2 pi only).
  std::vector<double> mode_a;
  std::vector<double> mode_b;
  /// Planar-ODE oracle at the save times (PlanarEmbedding only).
  std::vector<double> oracle_a;
  std::vector<double> oracle_b;
};

struct ScenarioResult {
  ScenarioConfig config;
  TrajectoryRecord trajectory;
  MonitorSeries series;
  /// Named diagnostics, e.g. max_residual, max_relative_increase.
  std::map<std::string, double> summary;
  ExitCode exit_code = ExitCode::Ok;
  std::string error_kind;
  std::string error_message;
  bool has_lyapunov_function = true;
};

/// Integrates the scenario and evaluates its monitor. Construction failures
/// and blow-up are reported through exit_code with the partial data kept;
/// only invalid configurations throw (ConfigError).
ScenarioResult run_scenario(const ScenarioConfig& cfg);

/// Nonlinearity used by the PDE of a scenario.
GeneralNonlinearity scenario_nonlinearity(const ScenarioConfig& cfg);

/// Smallest max-norm distance between `later` and integer grid rotations of
/// `earlier`, with the rotation distance theta (positive in +x) of the best
/// shift. Among equivalent shifts theta is the representative closest to
/// `expected_theta`.
struct ShiftMatch {
  double error = 0.0;
  double theta = 0.0;
  long shift = 0;
};
ShiftMatch best_shift(const ScalarField& earlier, const ScalarField& later, double expected_theta);

}  // namespace o2lyap
