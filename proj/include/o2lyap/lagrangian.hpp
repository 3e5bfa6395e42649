#pragma once

// Lagrange function L(u, p) of the Lyapunov functional for
//   u_t = u_xx + fbar(u, u_x^2 / 2)   on the circle.
//
// All quantities are built from the characteristic flow Psi^{u1,u0} of
// dq/du = -fbar(u, q), normalised at the base point u = 0:
//
//   metric exponent  E(u, q) = int_0^u fbar_q(s, Psi^{s,u}(q)) ds
//   potential        F(u)    = int_0^u fbar(s, 0) exp E(s, 0) ds
//   momentum         phi(u,p)= int_0^p Psi_q^{0,u}(s^2 / 2) ds        (= L_p)
//   L(u, p) = int_0^p int_0^{p1} exp E(u, p2^2 / 2) dp2 dp1 - F(u)      (DoubleIntegral)
//           = p phi(u, p) - Psi^{0,u}(p^2 / 2)                           (Reduced)
//   L_pp(u, p) = exp E(u, p^2 / 2) > 0.

#include <cstdint>
#include <unordered_map>
#include <utility>

#include "o2lyap/charflow.hpp"
#include "o2lyap/quadrature.hpp"

namespace o2lyap {

enum class LagrangianForm { DoubleIntegral, Reduced };

/// How the metric exponent E(u, q) is evaluated.
///  Transport: one pass along the characteristic through (u, q), accumulating
///             fbar_q (default).
///  NodeQuadrature: march the characteristic through the nodes of a
///             `nested_panels` quadrature rule on [0, u] and sum fbar_q there.
enum class ExponentRoute { Transport, NodeQuadrature };

/// Evaluates L and its ingredients for one nonlinearity.
///
/// Characteristic solves are memoised per instance, so an instance must be
/// confined to one thread. Distinct instances are independent.
class LagrangianEvaluator {
 public:
  LagrangianEvaluator(NonlinearityO2 nl, CharflowConfig charflow, QuadratureConfig quadrature,
                      LagrangianForm form = LagrangianForm::DoubleIntegral,
                      ExponentRoute route = ExponentRoute::Transport);

  const NonlinearityO2& nonlinearity() const { return nl_; }
  LagrangianForm form() const { return form_; }
  const CharflowConfig& charflow_config() const { return charflow_; }
  const QuadratureConfig& quadrature_config() const { return quad_cfg_; }

  /// E(u, q), the exponent of the convexity weight.
  double metric_exponent(double u, double q);
  /// F(u).
  double potential(double u);
  /// phi(u, p) = dL/dp.
  double momentum(double u, double p);
  /// L(u, p) in the configured form.
  double lagrangian(double u, double p);
  double lagrangian(double u, double p, LagrangianForm form);
  /// L_pp(u, p) = exp E(u, p^2 / 2).
  double convexity_weight(double u, double p);

  /// Psi^{0,u}(q): the characteristic through (u, q) evaluated at u = 0.
  double base_value(double u, double q);
  /// Psi_q^{0,u}(q).
  double base_sensitivity(double u, double q);

  void clear_cache();

 private:
  struct Key {
    std::uint64_t u, q;
    bool operator==(const Key&) const = default;
  };
  struct KeyHash {
    std::size_t operator()(const Key& k) const noexcept;
  };

  const EvolutionResult& base_evolution(double u, double q);
  double exponent_by_transport(double u, double q);
  double exponent_by_nodes(double u, double q);

  NonlinearityO2 nl_;
  CharflowConfig charflow_;
  QuadratureConfig quad_cfg_;
  Quadrature rule_;
  Quadrature nested_rule_;
  LagrangianForm form_;
  ExponentRoute route_;
  std::unordered_map<Key, EvolutionResult, KeyHash> evolution_cache_;
  std::unordered_map<Key, double, KeyHash> exponent_cache_;
};

/// fbar / abar with the quotient-rule q-derivative. Evaluation throws
/// DomainError wherever abar(u, q) <= 0.
NonlinearityO2 effective_nonlinearity(const NonlinearityO2& f_bar, const NonlinearityO2& a_bar);

}  // namespace o2lyap
