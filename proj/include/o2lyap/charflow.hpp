#pragma once

// Characteristic flow dq/du = -fbar(u, q) of an O(2)-equivariant nonlinearity
// f(u, p) = fbar(u, p^2 / 2), together with its sensitivity to initial data.

#include <functional>
#include <string>
#include <utility>

#include "o2lyap/ode.hpp"

namespace o2lyap {

/// Reflection-symmetric nonlinearity written in q = p^2 / 2.
struct NonlinearityO2 {
  std::function<double(double u, double q)> f_bar;
  /// Partial derivative of f_bar in its second argument.
  std::function<double(double u, double q)> f_bar_q;
  std::string label;
};

struct CharflowConfig {
  double rel_tol = 1e-10;
  double abs_tol = 1e-12;
  /// |q| beyond which integration stops with EscapedBound.
  double escape_bound = 1e12;
  long max_steps = 1'000'000;

  void validate() const;
  ode::Tolerances tolerances() const { return {rel_tol, abs_tol, max_steps}; }
  bool operator==(const CharflowConfig&) const = default;
};

enum class EvolutionStatus { Completed, EscapedBound };

struct EvolutionResult {
  double value = 0.0;        // q(u1)
  double sensitivity = 1.0;  // dq(u1)/dq0
  EvolutionStatus status = EvolutionStatus::Completed;
  double u_at_escape = 0.0;  // meaningful only for EscapedBound

  bool completed() const { return status == EvolutionStatus::Completed; }
};

/// q(u1) for dq/du = -fbar(u, q), q(u0) = q0, co-integrated with its
/// variational equation eta' = -fbar_q eta, eta(u0) = 1.
///
/// Throws IntegrationFailure on step exhaustion or a non-finite right-hand side.
EvolutionResult evolve(const NonlinearityO2& nl, double u0, double u1, double q0,
                       const CharflowConfig& cfg);

/// Result of transporting an additive exponent along a characteristic.
struct TransportResult {
  double value = 0.0;     // q(u1)
  double exponent = 0.0;  // integral of fbar_q(s, q(s)) ds from u1 to u0
  EvolutionStatus status = EvolutionStatus::Completed;
  double u_at_escape = 0.0;

  bool completed() const { return status == EvolutionStatus::Completed; }
};

/// Integrates the characteristic from (u0, q0) to u1 and accumulates
/// integral_{u1}^{u0} fbar_q(s, q(s)) ds on the way. With u0 = u, u1 = 0 the
/// exponent is the metric exponent of the Lagrangian at (u, q).
TransportResult transport(const NonlinearityO2& nl, double u0, double u1, double q0,
                          const CharflowConfig& cfg);

/// (Psi^{u2,u1}(Psi^{u1,u0}(q0)), Psi^{u2,u0}(q0)). Escapes raise CharacteristicEscape.
std::pair<double, double> compose_check(const NonlinearityO2& nl, double u0, double u1,
                                        double u2, double q0, const CharflowConfig& cfg);

/// Integrates the equilibrium profile u'' + fbar(u, u'^2/2) = 0 from
/// (u_init, p_init) over [0, x_span] and returns the largest deviation of
/// u'(x)^2 / 2 from the characteristic value Psi^{u(x),u_init}(p_init^2 / 2).
///
/// Requires p_init != 0. Throws CharacteristicEscape (carrying the reached x)
/// if the profile or a characteristic leaves the escape bound.
double verify_equilibrium_first_integral(const NonlinearityO2& nl, double u_init,
                                         double p_init, double x_span,
                                         const CharflowConfig& cfg, int samples = 256);

}  // namespace o2lyap
