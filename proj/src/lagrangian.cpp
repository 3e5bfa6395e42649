#include "o2lyap/lagrangian.hpp"

#include <bit>
#include <cmath>
#include <sstream>

#include "o2lyap/errors.hpp"

namespace o2lyap {

namespace {

[[noreturn]] void escape(const char* what, double u, double q, double at) {
  std::ostringstream os;
  os << what << ": characteristic from (u, q) = (" << u << ", " << q
     << ") left the escape bound at u = " << at;
  throw CharacteristicEscape(os.str(), at);
}

}  // namespace

std::size_t LagrangianEvaluator::KeyHash::operator()(const Key& k) const noexcept {
  std::uint64_t h = k.u * 0x9E3779B97F4A7C15ull;
  h ^= k.q + 0x632BE59BD9B4E019ull + (h << 6) + (h >> 2);
  return static_cast<std::size_t>(h);
}

LagrangianEvaluator::LagrangianEvaluator(NonlinearityO2 nl, CharflowConfig charflow,
                                         QuadratureConfig quadrature, LagrangianForm form,
                                         ExponentRoute route)
    : nl_(std::move(nl)),
      charflow_(charflow),
      quad_cfg_(quadrature),
      rule_((quadrature.validate(), quadrature.rule), quadrature.panels),
      nested_rule_(quadrature.rule, quadrature.nested_panels),
      form_(form),
      route_(route) {
  charflow_.validate();
  if (!nl_.f_bar || !nl_.f_bar_q) throw ConfigError("LagrangianEvaluator: empty nonlinearity");
}

void LagrangianEvaluator::clear_cache() {
  evolution_cache_.clear();
  exponent_cache_.clear();
}

const EvolutionResult& LagrangianEvaluator::base_evolution(double u, double q) {
  const Key key{std::bit_cast<std::uint64_t>(u), std::bit_cast<std::uint64_t>(q)};
  if (auto it = evolution_cache_.find(key); it != evolution_cache_.end()) return it->second;
  auto res = evolve(nl_, u, 0.0, q, charflow_);
  if (!res.completed()) escape("characteristic to the base point", u, q, res.u_at_escape);
  return evolution_cache_.emplace(key, res).first->second;
}

double LagrangianEvaluator::base_value(double u, double q) { return base_evolution(u, q).value; }

double LagrangianEvaluator::base_sensitivity(double u, double q) {
  return base_evolution(u, q).sensitivity;
}

double LagrangianEvaluator::exponent_by_transport(double u, double q) {
  const auto res = transport(nl_, u, 0.0, q, charflow_);
  if (!res.completed()) escape("metric exponent", u, q, res.u_at_escape);
  return res.exponent;
}

double LagrangianEvaluator::exponent_by_nodes(double u, double q) {
  // Walk from s = u down to s = 0 through the rule's nodes (descending), so
  // each characteristic segment is integrated once.
  const auto nodes = nested_rule_.nodes();
  const auto weights = nested_rule_.weights();
  double s = u;
  double q_s = q;
  double acc = 0.0;
  for (std::size_t k = nodes.size(); k-- > 0;) {
    const double target = u * nodes[k];
    const auto leg = evolve(nl_, s, target, q_s, charflow_);
    if (!leg.completed()) escape("metric exponent (node quadrature)", u, q, leg.u_at_escape);
    s = target;
    q_s = leg.value;
    acc += weights[k] * nl_.f_bar_q(s, q_s);
  }
  return u * acc;
}

double LagrangianEvaluator::metric_exponent(double u, double q) {
  if (u == 0.0) return 0.0;
  const Key key{std::bit_cast<std::uint64_t>(u), std::bit_cast<std::uint64_t>(q)};
  if (auto it = exponent_cache_.find(key); it != exponent_cache_.end()) return it->second;
  const double e =
      route_ == ExponentRoute::Transport ? exponent_by_transport(u, q) : exponent_by_nodes(u, q);
  exponent_cache_.emplace(key, e);
  return e;
}

double LagrangianEvaluator::potential(double u) {
  return rule_.integrate(
      [this](double s) { return nl_.f_bar(s, 0.0) * std::exp(metric_exponent(s, 0.0)); }, 0.0,
      u);
}

double LagrangianEvaluator::momentum(double u, double p) {
  return rule_.integrate([this, u](double s) { return base_sensitivity(u, 0.5 * s * s); }, 0.0,
                         p);
}

double LagrangianEvaluator::convexity_weight(double u, double p) {
  return std::exp(metric_exponent(u, 0.5 * p * p));
}

double LagrangianEvaluator::lagrangian(double u, double p) { return lagrangian(u, p, form_); }

double LagrangianEvaluator::lagrangian(double u, double p, LagrangianForm form) {
  double value = 0.0;
  if (form == LagrangianForm::DoubleIntegral) {
    const double kinetic = iterated_integral(
        [this, u](double s) { return std::exp(metric_exponent(u, 0.5 * s * s)); }, p, quad_cfg_);
    value = kinetic - potential(u);
  } else {
    value = p * momentum(u, p) - base_value(u, 0.5 * p * p);
  }
  if (!std::isfinite(value)) {
    std::ostringstream os;
    os << "lagrangian: non-finite value at (u, p) = (" << u << ", " << p << ")";
    throw Error(os.str());
  }
  return value;
}

NonlinearityO2 effective_nonlinearity(const NonlinearityO2& f_bar, const NonlinearityO2& a_bar) {
  const auto checked = [a_bar](double u, double q) {
    const double a = a_bar.f_bar(u, q);
    if (!(a > 0.0)) {
      std::ostringstream os;
      os << "effective_nonlinearity: diffusion coefficient " << a << " is not positive at (u, q) = ("
         << u << ", " << q << ")";
      throw DomainError(os.str());
    }
    return a;
  };
  NonlinearityO2 out;
  out.label = f_bar.label + "/" + a_bar.label;
  out.f_bar = [f = f_bar.f_bar, checked](double u, double q) { return f(u, q) / checked(u, q); };
  out.f_bar_q = [f = f_bar.f_bar, fq = f_bar.f_bar_q, aq = a_bar.f_bar_q, checked](double u,
                                                                                     double q) {
    const double a = checked(u, q);
    return (fq(u, q) * a - f(u, q) * aq(u, q)) / (a * a);
  };
  return out;
}

}  // namespace o2lyap
