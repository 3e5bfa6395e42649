#pragma once

#include <functional>
#include <limits>
#include <optional>
#include <vector>

#include "o2lyap/field.hpp"
#include "o2lyap/lagrangian.hpp"

namespace o2lyap {

struct FunctionalReport {
  double V = 0.0;
  /// Weighted dissipation integral  int w L_pp u_t^2 dx  (>= 0).
  double dissipation = 0.0;
  double convexity_min = std::numeric_limits<double>::infinity();
};

/// Integrand callbacks for a Lagrangian that may depend on x.
struct LagrangianDensity {
  std::function<double(double x, double u, double p)> value;
  std::function<double(double x, double u, double p)> convexity;
};

/// V = int L(x, u, u_x) dx on the grid, with the minimum of L_pp. Dissipation is left 0.
/// Lagrangian failures are rethrown as GridEvaluationError with the grid index.
FunctionalReport evaluate_V(const LagrangianDensity& density, const ScalarField& field);
FunctionalReport evaluate_V(LagrangianEvaluator& ev, const ScalarField& field);

/// -int w L_pp(u, u_x) u_t^2 dx with w = 1, or w = 1 / abar(u, u_x^2 / 2)
/// when a quasilinear diffusion coefficient is given (the second overload
/// takes the coefficient as a function of (x, u, p)). Always <= 0.
/// A non-positive coefficient raises DomainError.
double dissipation_rate(LagrangianEvaluator& ev, const ScalarField& field, const ScalarField& u_t,
                        const std::optional<NonlinearityO2>& weight_a = std::nullopt);
double dissipation_rate(const LagrangianDensity& density, const ScalarField& field,
                        const ScalarField& u_t,
                        const std::function<double(double x, double u, double p)>& diffusion = {});

LagrangianDensity density_of(LagrangianEvaluator& ev);

/// Decay-identity residuals |dV/dt - rate| at interior save points, with dV/dt
/// by centred differences over the neighbouring saves. Entry k corresponds to
/// save k + 1.
std::vector<double> decay_residuals(const std::vector<double>& times, const std::vector<double>& V,
                                    const std::vector<double>& rates);

/// Centred-difference dV/dt at interior save points (same indexing as above).
std::vector<double> centred_rates(const std::vector<double>& times, const std::vector<double>& V);

}  // namespace o2lyap
