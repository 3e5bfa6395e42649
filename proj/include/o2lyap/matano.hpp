#pragma once

// Lagrange function for u_t = u_xx + f(x, u, u_x) under separated boundary
// conditions, built from the characteristic system
//   u' = p,  p' = -f(x, u, p),  g' = f_p(x, u, p),   g = 0 at x = 0,
// with L_pp = exp g. Also the obstruction that appears on the circle.

#include <cstdint>
#include <unordered_map>
#include <vector>

#include "o2lyap/charflow.hpp"
#include "o2lyap/pde.hpp"
#include "o2lyap/quadrature.hpp"

namespace o2lyap {

struct CharacteristicState {
  double x = 0.0;
  double u = 0.0;
  double p = 0.0;
  double g = 0.0;
};

/// Follows the characteristic through (x, u, p) back to x = 0. The returned
/// state holds the foot point (0, u0, p0) and the exponent g(x, u, p).
/// Throws CharacteristicEscape with the reached x when |u| or |p| exceeds the
/// escape bound.
CharacteristicState trace_to_origin(const GeneralNonlinearity& nl, double x, double u, double p,
                                    const CharflowConfig& cfg);

/// L(x, u, p) = int_0^p int_0^{p1} exp g(x, u, p2) dp2 dp1 - F(x, u),
/// F(x, u) = int_0^u f(x, s, 0) exp g(x, s, 0) ds.
/// Exponent evaluations are memoised; confine an instance to one thread.
class SeparatedLagrangian {
 public:
  SeparatedLagrangian(GeneralNonlinearity nl, CharflowConfig charflow,
                      QuadratureConfig quadrature);

  const GeneralNonlinearity& nonlinearity() const { return nl_; }

  double g_value(double x, double u, double p);
  double potential(double x, double u);
  double lagrangian(double x, double u, double p);
  double convexity_weight(double x, double u, double p);

  LagrangianDensity density();

 private:
  struct Key {
    std::uint64_t x, u, p;
    bool operator==(const Key&) const = default;
  };
  struct KeyHash {
    std::size_t operator()(const Key& k) const noexcept;
  };

  GeneralNonlinearity nl_;
  CharflowConfig charflow_;
  QuadratureConfig quad_cfg_;
  Quadrature rule_;
  std::unordered_map<Key, double, KeyHash> cache_;
};

/// Per interior save point, |dV/dt - (-int L_pp u_t^2 dx)| with dV/dt by
/// centred differences of V over neighbouring saves. Requires a Dirichlet run.
std::vector<double> decay_identity_residual(SeparatedLagrangian& lag,
                                            const TrajectoryRecord& trajectory);

/// V and -int L_pp u_t^2 at every save of a Dirichlet run.
void separated_series(SeparatedLagrangian& lag, const TrajectoryRecord& trajectory,
                      std::vector<double>& V, std::vector<double>& rates);

struct PeriodicCharacteristic {
  double u0 = 0.0;
  double p0 = 0.0;
  /// int_0^period f_p(x, u(x), p(x)) dx along the located orbit.
  double defect = 0.0;
  double return_error = 0.0;
  int iterations = 0;
};

/// Locates a characteristic with (u, p)(period) = (u, p)(0) near the seed by
/// Newton shooting (finite-difference Jacobian, minimum-norm steps) and
/// returns the integral of f_p along it. A nonzero defect obstructs the
/// separated-boundary construction on the circle.
/// Throws NoPeriodicOrbit when 50 iterations do not reach `tolerance`.
PeriodicCharacteristic integrability_defect(const GeneralNonlinearity& nl, double u_seed,
                                            double p_seed, const CharflowConfig& cfg,
                                            double period = 1.0, double tolerance = 1e-10);

}  // namespace o2lyap
