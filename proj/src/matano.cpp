#include "o2lyap/matano.hpp"

#include <Eigen/Dense>
#include <bit>
#include <cmath>
#include <sstream>

#include "o2lyap/errors.hpp"

namespace o2lyap {

CharacteristicState trace_to_origin(const GeneralNonlinearity& nl, double x, double u, double p,
                                    const CharflowConfig& cfg) {
  // y = (u, p, G) with G' = f_p, G(x) = 0; then g(x, u, p) = -G(0).
  const auto rhs = [&nl](double s, const ode::State<3>& y) -> ode::State<3> {
    return {y[1], -nl.f(s, y[0], y[1]), nl.f_p(s, y[0], y[1])};
  };
  const double bound = cfg.escape_bound;
  const auto sol = ode::integrate<3>(rhs, x, {u, p, 0.0}, 0.0, cfg.tolerances(),
                                     [bound](const ode::State<3>& y) {
                                       return std::abs(y[0]) > bound || std::abs(y[1]) > bound;
                                     });
  if (sol.outcome == ode::Outcome::Escaped) {
    std::ostringstream os;
    os << "separated characteristic from (x, u, p) = (" << x << ", " << u << ", " << p
       << ") escaped at x = " << sol.t;
    throw CharacteristicEscape(os.str(), sol.t);
  }
  if (sol.outcome != ode::Outcome::Completed) {
    throw IntegrationFailure("separated characteristic integration failed", sol.t);
  }
  return {0.0, sol.y[0], sol.y[1], -sol.y[2]};
}

std::size_t SeparatedLagrangian::KeyHash::operator()(const Key& k) const noexcept {
  std::uint64_t h = k.x * 0x9E3779B97F4A7C15ull;
  h ^= k.u + 0x632BE59BD9B4E019ull + (h << 6) + (h >> 2);
  h ^= k.p + 0xD6E8FEB86659FD93ull + (h << 6) + (h >> 2);
  return static_cast<std::size_t>(h);
}

SeparatedLagrangian::SeparatedLagrangian(GeneralNonlinearity nl, CharflowConfig charflow,
                                         QuadratureConfig quadrature)
    : nl_(std::move(nl)),
      charflow_(charflow),
      quad_cfg_(quadrature),
      rule_((quadrature.validate(), quadrature.rule), quadrature.panels) {
  charflow_.validate();
  if (!nl_.f || !nl_.f_p) throw ConfigError("SeparatedLagrangian: empty nonlinearity");
}

double SeparatedLagrangian::g_value(double x, double u, double p) {
  if (x == 0.0) return 0.0;
  const Key key{std::bit_cast<std::uint64_t>(x), std::bit_cast<std::uint64_t>(u),
                std::bit_cast<std::uint64_t>(p)};
  if (auto it = cache_.find(key); it != cache_.end()) return it->second;
  const double g = trace_to_origin(nl_, x, u, p, charflow_).g;
  cache_.emplace(key, g);
  return g;
}

double SeparatedLagrangian::potential(double x, double u) {
  return rule_.integrate([&](double s) { return nl_.f(x, s, 0.0) * std::exp(g_value(x, s, 0.0)); },
                         0.0, u);
}

double SeparatedLagrangian::lagrangian(double x, double u, double p) {
  const double kinetic =
      iterated_integral([&](double s) { return std::exp(g_value(x, u, s)); }, p, quad_cfg_);
  return kinetic - potential(x, u);
}

double SeparatedLagrangian::convexity_weight(double x, double u, double p) {
  return std::exp(g_value(x, u, p));
}

LagrangianDensity SeparatedLagrangian::density() {
  return {[this](double x, double u, double p) { return lagrangian(x, u, p); },
          [this](double x, double u, double p) { return convexity_weight(x, u, p); }};
}

void separated_series(SeparatedLagrangian& lag, const TrajectoryRecord& trajectory,
                      std::vector<double>& V, std::vector<double>& rates) {
  V.clear();
  rates.clear();
  const auto dens = lag.density();
  for (std::size_t k = 0; k < trajectory.times.size(); ++k) {
    const auto& field = trajectory.snapshots[k];
    if (field.bc != BoundaryCondition::Dirichlet) {
      throw ConfigError("decay_identity_residual: trajectory must use Dirichlet conditions");
    }
    V.push_back(evaluate_V(dens, field).V);
    rates.push_back(dissipation_rate(dens, field, trajectory.u_t_snapshots[k]));
  }
}

std::vector<double> decay_identity_residual(SeparatedLagrangian& lag,
                                            const TrajectoryRecord& trajectory) {
  std::vector<double> V, rates;
  separated_series(lag, trajectory, V, rates);
  return decay_residuals(trajectory.times, V, rates);
}

PeriodicCharacteristic integrability_defect(const GeneralNonlinearity& nl, double u_seed,
                                            double p_seed, const CharflowConfig& cfg,
                                            double period, double tolerance) {
  constexpr int kMaxIterations = 50;
  ode::Tolerances tol = cfg.tolerances();
  tol.rel_tol = std::min(tol.rel_tol, 1e-12);
  tol.abs_tol = std::min(tol.abs_tol, 1e-14);

  const auto rhs = [&nl](double x, const ode::State<3>& y) -> ode::State<3> {
    return {y[1], -nl.f(x, y[0], y[1]), nl.f_p(x, y[0], y[1])};
  };
  const double bound = cfg.escape_bound;
  const auto shoot = [&](double u0, double p0) {
    const auto sol = ode::integrate<3>(rhs, 0.0, {u0, p0, 0.0}, period, tol,
                                       [bound](const ode::State<3>& y) {
                                         return std::abs(y[0]) > bound || std::abs(y[1]) > bound;
                                       });
    if (sol.outcome != ode::Outcome::Completed) {
      throw NoPeriodicOrbit("integrability_defect: shooting trajectory failed to complete");
    }
    return sol.y;
  };

  Eigen::Vector2d z(u_seed, p_seed);
  PeriodicCharacteristic out;
  for (int it = 0; it <= kMaxIterations; ++it) {
    const auto end = shoot(z[0], z[1]);
    const Eigen::Vector2d r(end[0] - z[0], end[1] - z[1]);
    out.iterations = it;
    if (r.norm() <= tolerance) {
      out.u0 = z[0];
      out.p0 = z[1];
      out.defect = end[2];
      out.return_error = r.norm();
      return out;
    }
    if (it == kMaxIterations) break;
    Eigen::Matrix2d jac;
    for (int j = 0; j < 2; ++j) {
      const double step = 1e-6 * std::max(1.0, std::abs(z[j]));
      Eigen::Vector2d zp = z, zm = z;
      zp[j] += step;
      zm[j] -= step;
      const auto ep = shoot(zp[0], zp[1]);
      const auto em = shoot(zm[0], zm[1]);
      const Eigen::Vector2d rp(ep[0] - zp[0], ep[1] - zp[1]);
      const Eigen::Vector2d rm(em[0] - zm[0], em[1] - zm[1]);
      jac.col(j) = (rp - rm) / (2.0 * step);
    }
    Eigen::CompleteOrthogonalDecomposition<Eigen::Matrix2d> cod(jac);
    cod.setThreshold(1e-9);
    z -= cod.solve(r);
    if (!z.allFinite()) break;
  }
  std::ostringstream os;
  os << "integrability_defect: no periodic characteristic found near (" << u_seed << ", "
     << p_seed << ")";
  throw NoPeriodicOrbit(os.str());
}

}  // namespace o2lyap
