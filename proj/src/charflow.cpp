#include "o2lyap/charflow.hpp"

#include <cmath>
#include <sstream>

#include "o2lyap/errors.hpp"

namespace o2lyap {

namespace {

void require_finite(std::initializer_list<double> values, const char* op) {
  for (double v : values) {
    if (!std::isfinite(v)) throw ConfigError(std::string(op) + ": non-finite input");
  }
}

[[noreturn]] void throw_failure(const char* op, ode::Outcome outcome, double reached) {
  std::ostringstream os;
  os << op << ": integration "
     << (outcome == ode::Outcome::StepLimit ? "exhausted its step budget"
                                            : "met a non-finite right-hand side")
     << " at u = " << reached;
  throw IntegrationFailure(os.str(), reached);
}

}  // namespace

void CharflowConfig::validate() const {
  if (!(rel_tol > 0) || !(abs_tol > 0) || !(escape_bound > 0) || max_steps <= 0) {
    throw ConfigError("CharflowConfig: tolerances, escape bound and step budget must be positive");
  }
}

EvolutionResult evolve(const NonlinearityO2& nl, double u0, double u1, double q0,
                       const CharflowConfig& cfg) {
  require_finite({u0, u1, q0}, "evolve");
  EvolutionResult res;
  res.value = q0;
  res.sensitivity = 1.0;
  if (u0 == u1) return res;

  const auto rhs = [&nl](double u, const ode::State<2>& y) -> ode::State<2> {
    return {-nl.f_bar(u, y[0]), -nl.f_bar_q(u, y[0]) * y[1]};
  };
  const double bound = cfg.escape_bound;
  const auto sol = ode::integrate<2>(rhs, u0, {q0, 1.0}, u1, cfg.tolerances(),
                                     [bound](const ode::State<2>& y) {
                                       return std::abs(y[0]) > bound;
                                     });
  switch (sol.outcome) {
    case ode::Outcome::Completed:
      res.value = sol.y[0];
      res.sensitivity = sol.y[1];
      return res;
    case ode::Outcome::Escaped:
      res.value = sol.y[0];
      res.sensitivity = sol.y[1];
      res.status = EvolutionStatus::EscapedBound;
      res.u_at_escape = sol.t;
      return res;
    default:
      throw_failure("evolve", sol.outcome, sol.t);
  }
}

TransportResult transport(const NonlinearityO2& nl, double u0, double u1, double q0,
                          const CharflowConfig& cfg) {
  require_finite({u0, u1, q0}, "transport");
  TransportResult res;
  res.value = q0;
  if (u0 == u1) return res;

  // y[1] accumulates -integral_{u0}^{u} fbar_q, which at u = u1 equals the
  // integral from u1 to u0.
  const auto rhs = [&nl](double u, const ode::State<2>& y) -> ode::State<2> {
    return {-nl.f_bar(u, y[0]), -nl.f_bar_q(u, y[0])};
  };
  const double bound = cfg.escape_bound;
  const auto sol = ode::integrate<2>(rhs, u0, {q0, 0.0}, u1, cfg.tolerances(),
                                     [bound](const ode::State<2>& y) {
                                       return std::abs(y[0]) > bound;
                                     });
  switch (sol.outcome) {
    case ode::Outcome::Completed:
      res.value = sol.y[0];
      res.exponent = sol.y[1];
      return res;
    case ode::Outcome::Escaped:
      res.value = sol.y[0];
      res.exponent = sol.y[1];
      res.status = EvolutionStatus::EscapedBound;
      res.u_at_escape = sol.t;
      return res;
    default:
      throw_failure("transport", sol.outcome, sol.t);
  }
}

std::pair<double, double> compose_check(const NonlinearityO2& nl, double u0, double u1,
                                        double u2, double q0, const CharflowConfig& cfg) {
  const auto leg = [&](double from, double to, double q) {
    const auto r = evolve(nl, from, to, q, cfg);
    if (!r.completed()) {
      throw CharacteristicEscape("compose_check: characteristic escaped", r.u_at_escape);
    }
    return r.value;
  };
  const double chained = leg(u1, u2, leg(u0, u1, q0));
  const double direct = leg(u0, u2, q0);
  return {chained, direct};
}

double verify_equilibrium_first_integral(const NonlinearityO2& nl, double u_init,
                                         double p_init, double x_span,
                                         const CharflowConfig& cfg, int samples) {
  require_finite({u_init, p_init, x_span}, "verify_equilibrium_first_integral");
  if (p_init == 0.0) {
    throw ConfigError("verify_equilibrium_first_integral: p_init must be nonzero");
  }
  if (samples < 1) throw ConfigError("verify_equilibrium_first_integral: samples < 1");

  const auto rhs = [&nl](double, const ode::State<2>& y) -> ode::State<2> {
    return {y[1], -nl.f_bar(y[0], 0.5 * y[1] * y[1])};
  };
  const double bound = cfg.escape_bound;
  const auto guard = [bound](const ode::State<2>& y) {
    return std::abs(y[0]) > bound || 0.5 * y[1] * y[1] > bound;
  };
  const double q_init = 0.5 * p_init * p_init;

  ode::State<2> y{u_init, p_init};
  double x = 0.0;
  double worst = 0.0;
  for (int k = 1; k <= samples; ++k) {
    const double x_next = x_span * static_cast<double>(k) / samples;
    const auto sol = ode::integrate<2>(rhs, x, y, x_next, cfg.tolerances(), guard);
    if (sol.outcome == ode::Outcome::Escaped) {
      throw CharacteristicEscape("equilibrium profile blew up", sol.t);
    }
    if (sol.outcome != ode::Outcome::Completed) {
      throw_failure("verify_equilibrium_first_integral", sol.outcome, sol.t);
    }
    y = sol.y;
    x = x_next;
    const auto ch = evolve(nl, u_init, y[0], q_init, cfg);
    if (!ch.completed()) {
      throw CharacteristicEscape("characteristic escaped while checking the first integral", x);
    }
    worst = std::max(worst, std::abs(0.5 * y[1] * y[1] - ch.value));
  }
  return worst;
}

}  // namespace o2lyap
