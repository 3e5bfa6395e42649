#include "o2lyap/scenario.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <set>
#include <sstream>

#include "json.hpp"
#include "o2lyap/errors.hpp"
#include "o2lyap/fourier.hpp"
#include "o2lyap/functional.hpp"
#include "o2lyap/matano.hpp"
#include "o2lyap/planar.hpp"

namespace o2lyap {

using nlohmann::json;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct ScenarioInfo {
  Scenario id;
  std::string_view name;
  std::string_view summary;
};

constexpr std::array<ScenarioInfo, 8> kScenarios{{
    {Scenario::Classical, "classical",
     "u_t = u_xx + lambda u(1-u^2) monitored with the textbook energy int u_x^2/2 - F(u)"},
    {Scenario::ChafeeInfante, "chafee-infante",
     "u_t = u_xx + lambda u(1-u^2) on the circle, Lyapunov function built from characteristics"},
    {Scenario::FrozenWave, "frozen-wave",
     "Chafee-Infante on the circle of length 2 pi, relaxing to a nonconstant equilibrium"},
    {Scenario::RotatingWave, "rotating-wave",
     "SO(2) advection u_t = u_xx + lambda u(1-u^2) - c u_x; the profile travels at speed c"},
    {Scenario::QLinear, "quasilinear",
     "u_t = a u_xx + lambda u(1-u^2) + kappa q u, monitored with the f/a Lagrangian"},
    {Scenario::GradientQuadratic, "gradient-quadratic",
     "u_t = u_xx - u + b u_x^2/2, a case with nonconstant metric L_pp = exp(b u)"},
    {Scenario::PlanarEmbedding, "planar-embedding",
     "reflection-symmetric f(x,u,u_x) carrying a planar centre; time-periodic PDE orbit"},
    {Scenario::MatanoSeparated, "matano-separated",
     "u_t = u_xx + lambda u(1-u^2) + epsilon u_x with Dirichlet ends, separated-BC Lagrangian"},
}};

const ScenarioInfo& info(Scenario s) {
  for (const auto& i : kScenarios) {
    if (i.id == s) return i;
  }
  throw ConfigError("unknown scenario id");
}

template <class E>
struct EnumName {
  E value;
  const char* name;
};

constexpr EnumName<BoundaryCondition> kBcNames[] = {{BoundaryCondition::Periodic, "periodic"},
                                                    {BoundaryCondition::Dirichlet, "dirichlet"},
                                                    {BoundaryCondition::Neumann, "neumann"}};
constexpr EnumName<Scheme> kSchemeNames[] = {{Scheme::RK4Explicit, "rk4"},
                                             {Scheme::IMEXDiffusion, "imex"}};
constexpr EnumName<QuadratureRule> kRuleNames[] = {{QuadratureRule::CompositeSimpson, "simpson"},
                                                   {QuadratureRule::GaussLegendre, "gauss-legendre"}};
constexpr EnumName<LagrangianForm> kFormNames[] = {{LagrangianForm::DoubleIntegral, "double-integral"},
                                                   {LagrangianForm::Reduced, "reduced"}};
constexpr EnumName<InitialKind> kInitialNames[] = {{InitialKind::FourierMix, "fourier-mix"},
                                                   {InitialKind::RandomSmooth, "random-smooth"},
                                                   {InitialKind::Import, "import"}};

template <class E, std::size_t N>
std::string to_name(const EnumName<E> (&table)[N], E value) {
  for (const auto& e : table) {
    if (e.value == value) return e.name;
  }
  throw ConfigError("unnamed enumeration value");
}

template <class E, std::size_t N>
E from_name(const EnumName<E> (&table)[N], const std::string& name, const char* what) {
  for (const auto& e : table) {
    if (name == e.name) return e.value;
  }
  std::string msg = std::string("unknown ") + what + " '" + name + "' (expected one of:";
  for (const auto& e : table) msg += std::string(" ") + e.name;
  throw ConfigError(msg + ")");
}

// Rejects keys outside `allowed` so misspelt settings do not pass silently.
void check_keys(const json& j, std::initializer_list<const char*> allowed, const char* where) {
  if (!j.is_object()) throw ConfigError(std::string(where) + ": expected an object");
  const std::set<std::string> known(allowed.begin(), allowed.end());
  for (const auto& [key, value] : j.items()) {
    if (!known.count(key)) throw ConfigError(std::string(where) + ": unknown key '" + key + "'");
  }
}

template <class T>
void read(const json& j, const char* key, T& out, const char* where) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string(where) + "." + key + ": " + e.what());
  }
}

json to_json(const ScenarioConfig& c) {
  json terms = json::array();
  for (const auto& t : c.initial.terms) {
    terms.push_back({{"mode", t.mode}, {"cos", t.cos_amp}, {"sin", t.sin_amp}});
  }
  return {
      {"scenario", std::string(scenario_name(c.scenario))},
      {"params",
       {{"lambda", c.params.lambda},
        {"c", c.params.c},
        {"epsilon", c.params.epsilon},
        {"b", c.params.b},
        {"kappa", c.params.kappa},
        {"a_bar", c.params.a_bar},
        {"relax_time", c.params.relax_time},
        {"periods", c.params.periods}}},
      {"domain_length", c.domain_length},
      {"bc", to_name(kBcNames, c.bc)},
      {"initial",
       {{"kind", to_name(kInitialNames, c.initial.kind)},
        {"offset", c.initial.offset},
        {"terms", terms},
        {"seed", c.initial.seed},
        {"modes", c.initial.modes},
        {"amplitude", c.initial.amplitude},
        {"decay", c.initial.decay},
        {"taper", c.initial.taper},
        {"path", c.initial.path},
        {"import_time", c.initial.import_time}}},
      {"solver",
       {{"n", c.solver.n},
        {"dt", c.solver.dt},
        {"t_end", c.solver.t_end},
        {"save_every", c.solver.save_every},
        {"scheme", to_name(kSchemeNames, c.solver.scheme)}}},
      {"quadrature",
       {{"rule", to_name(kRuleNames, c.quadrature.rule)},
        {"panels", c.quadrature.panels},
        {"nested_panels", c.quadrature.nested_panels}}},
      {"charflow",
       {{"rel_tol", c.charflow.rel_tol},
        {"abs_tol", c.charflow.abs_tol},
        {"escape_bound", c.charflow.escape_bound},
        {"max_steps", c.charflow.max_steps}}},
      {"form", to_name(kFormNames, c.form)},
      {"output_path", c.output_path},
  };
}

ScenarioConfig from_json(const json& j) {
  check_keys(j,
             {"scenario", "params", "domain_length", "bc", "initial", "solver", "quadrature",
              "charflow", "form", "output_path"},
             "config");
  if (!j.contains("scenario")) throw ConfigError("config: missing key 'scenario'");
  std::string name;
  read(j, "scenario", name, "config");
  ScenarioConfig c = default_config(scenario_from_name(name));

  if (j.contains("params")) {
    const auto& p = j.at("params");
    check_keys(p, {"lambda", "c", "epsilon", "b", "kappa", "a_bar", "relax_time", "periods"},
               "params");
    read(p, "lambda", c.params.lambda, "params");
    read(p, "c", c.params.c, "params");
    read(p, "epsilon", c.params.epsilon, "params");
    read(p, "b", c.params.b, "params");
    read(p, "kappa", c.params.kappa, "params");
    read(p, "a_bar", c.params.a_bar, "params");
    read(p, "relax_time", c.params.relax_time, "params");
    read(p, "periods", c.params.periods, "params");
  }
  read(j, "domain_length", c.domain_length, "config");
  if (j.contains("bc")) c.bc = from_name(kBcNames, j.at("bc").get<std::string>(), "boundary condition");
  if (j.contains("initial")) {
    const auto& i = j.at("initial");
    check_keys(i,
               {"kind", "offset", "terms", "seed", "modes", "amplitude", "decay", "taper", "path",
                "import_time"},
               "initial");
    if (i.contains("kind")) {
      c.initial.kind = from_name(kInitialNames, i.at("kind").get<std::string>(), "initial kind");
    }
    read(i, "offset", c.initial.offset, "initial");
    if (i.contains("terms")) {
      c.initial.terms.clear();
      for (const auto& t : i.at("terms")) {
        check_keys(t, {"mode", "cos", "sin"}, "initial.terms");
        FourierTerm term;
        read(t, "mode", term.mode, "initial.terms");
        read(t, "cos", term.cos_amp, "initial.terms");
        read(t, "sin", term.sin_amp, "initial.terms");
        c.initial.terms.push_back(term);
      }
    }
    read(i, "seed", c.initial.seed, "initial");
    read(i, "modes", c.initial.modes, "initial");
    read(i, "amplitude", c.initial.amplitude, "initial");
    read(i, "decay", c.initial.decay, "initial");
    read(i, "taper", c.initial.taper, "initial");
    read(i, "path", c.initial.path, "initial");
    read(i, "import_time", c.initial.import_time, "initial");
  }
  if (j.contains("solver")) {
    const auto& s = j.at("solver");
    check_keys(s, {"n", "dt", "t_end", "save_every", "scheme"}, "solver");
    read(s, "n", c.solver.n, "solver");
    read(s, "dt", c.solver.dt, "solver");
    read(s, "t_end", c.solver.t_end, "solver");
    read(s, "save_every", c.solver.save_every, "solver");
    if (s.contains("scheme")) {
      c.solver.scheme = from_name(kSchemeNames, s.at("scheme").get<std::string>(), "scheme");
    }
  }
  if (j.contains("quadrature")) {
    const auto& q = j.at("quadrature");
    check_keys(q, {"rule", "panels", "nested_panels"}, "quadrature");
    if (q.contains("rule")) {
      c.quadrature.rule = from_name(kRuleNames, q.at("rule").get<std::string>(), "quadrature rule");
    }
    read(q, "panels", c.quadrature.panels, "quadrature");
    read(q, "nested_panels", c.quadrature.nested_panels, "quadrature");
  }
  if (j.contains("charflow")) {
    const auto& f = j.at("charflow");
    check_keys(f, {"rel_tol", "abs_tol", "escape_bound", "max_steps"}, "charflow");
    read(f, "rel_tol", c.charflow.rel_tol, "charflow");
    read(f, "abs_tol", c.charflow.abs_tol, "charflow");
    read(f, "escape_bound", c.charflow.escape_bound, "charflow");
    read(f, "max_steps", c.charflow.max_steps, "charflow");
  }
  if (j.contains("form")) c.form = from_name(kFormNames, j.at("form").get<std::string>(), "form");
  read(j, "output_path", c.output_path, "config");
  c.validate();
  return c;
}

NonlinearityO2 chafee_infante(double lambda) {
  return {[lambda](double u, double) { return lambda * u * (1.0 - u * u); },
          [](double, double) { return 0.0; }, "chafee-infante"};
}

NonlinearityO2 scenario_o2(const ScenarioConfig& cfg) {
  const auto& p = cfg.params;
  switch (cfg.scenario) {
    case Scenario::Classical:
    case Scenario::ChafeeInfante:
    case Scenario::FrozenWave:
      return chafee_infante(p.lambda);
    case Scenario::QLinear: {
      const double lambda = p.lambda, kappa = p.kappa;
      return {[=](double u, double q) { return lambda * u * (1.0 - u * u) + kappa * q * u; },
              [=](double u, double) { return kappa * u; }, "quasilinear"};
    }
    case Scenario::GradientQuadratic: {
      const double b = p.b;
      return {[b](double u, double q) { return -u + b * q; }, [b](double, double) { return b; },
              "gradient-quadratic"};
    }
    default:
      throw ConfigError("scenario has no O(2) nonlinearity");
  }
}

double range_of(const std::vector<double>& v) {
  const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
  return *hi - *lo;
}

bool is_two_pi_circle(const ScenarioConfig& cfg) {
  return cfg.bc == BoundaryCondition::Periodic && std::abs(cfg.domain_length - kTwoPi) < 1e-12;
}

// Fills V, dissipation, residual and convexity from a density.
void monitor_lyapunov(const LagrangianDensity& density,
                      const std::function<double(double, double, double)>& diffusion,
                      const TrajectoryRecord& tr, ScenarioResult& out) {
  auto& s = out.series;
  std::vector<double> rates;
  for (std::size_t k = 0; k < tr.times.size(); ++k) {
    const FunctionalReport rep = evaluate_V(density, tr.snapshots[k]);
    const double rate = dissipation_rate(density, tr.snapshots[k], tr.u_t_snapshots[k], diffusion);
    s.V[k] = rep.V;
    s.dissipation[k] = -rate;
    s.convexity_min[k] = rep.convexity_min;
    rates.push_back(rate);
  }
  double max_res = 0.0, max_rel = 0.0;
  if (tr.times.size() >= 3) {
    const auto res = decay_residuals(tr.times, s.V, rates);
    for (std::size_t k = 0; k < res.size(); ++k) {
      s.residual[k + 1] = res[k];
      max_res = std::max(max_res, res[k]);
      max_rel = std::max(max_rel, res[k] / std::max(1.0, std::abs(rates[k + 1])));
    }
  }
  double max_increase = 0.0;
  double violations = 0.0;
  for (std::size_t k = 0; k + 1 < s.V.size(); ++k) {
    const double inc = s.V[k + 1] - s.V[k];
    const double scale = std::abs(s.V[k]);
    if (inc > 0.0) max_increase = std::max(max_increase, scale > 0.0 ? inc / scale : inc);
    if (inc > 1e-9 * scale) violations += 1.0;
  }
  out.summary["max_residual"] = max_res;
  out.summary["max_relative_residual"] = max_rel;
  out.summary["max_relative_increase"] = max_increase;
  out.summary["monotonicity_violations"] = violations;
  out.summary["initial_V"] = s.V.front();
  out.summary["final_V"] = s.V.back();
  out.summary["min_convexity"] = *std::min_element(s.convexity_min.begin(), s.convexity_min.end());
}

std::string error_kind(const std::exception& e) {
  if (dynamic_cast<const GridEvaluationError*>(&e)) return "grid-evaluation";
  if (dynamic_cast<const CharacteristicEscape*>(&e)) return "characteristic-escape";
  if (dynamic_cast<const IntegrationFailure*>(&e)) return "integration-failure";
  if (dynamic_cast<const DomainError*>(&e)) return "domain";
  if (dynamic_cast<const NoPeriodicOrbit*>(&e)) return "no-periodic-orbit";
  if (dynamic_cast<const NonFiniteState*>(&e)) return "non-finite-state";
  if (dynamic_cast<const ConfigError*>(&e)) return "config";
  return "error";
}

}  // namespace

std::string_view scenario_name(Scenario s) { return info(s).name; }
std::string_view scenario_summary(Scenario s) { return info(s).summary; }

Scenario scenario_from_name(std::string_view name) {
  for (const auto& i : kScenarios) {
    if (i.name == name) return i.id;
  }
  throw ConfigError("unknown scenario '" + std::string(name) + "'");
}

std::vector<Scenario> all_scenarios() {
  std::vector<Scenario> out;
  for (const auto& i : kScenarios) out.push_back(i.id);
  return out;
}

void ScenarioConfig::validate() const {
  if (!(domain_length > 0.0) || !std::isfinite(domain_length)) {
    throw ConfigError("config: domain_length must be positive");
  }
  solver.validate();
  quadrature.validate();
  charflow.validate();
  initial.validate(bc);
  if (solver.diffusion != 1.0) {
    throw ConfigError("config: the diffusion coefficient is set by the scenario (params.a_bar)");
  }
  const auto need = [&](bool ok, const char* msg) {
    if (!ok) throw ConfigError(std::string(scenario_name(scenario)) + ": " + msg);
  };
  switch (scenario) {
    case Scenario::PlanarEmbedding:
      need(is_two_pi_circle(*this), "requires a periodic domain of length 2 pi");
      need(params.periods > 0.0, "periods must be positive");
      break;
    case Scenario::MatanoSeparated:
      need(bc == BoundaryCondition::Dirichlet, "requires Dirichlet boundary conditions");
      break;
    case Scenario::RotatingWave:
      need(bc == BoundaryCondition::Periodic, "requires periodic boundary conditions");
      need(params.relax_time >= 0.0, "relax_time must be >= 0");
      break;
    case Scenario::QLinear:
      need(bc == BoundaryCondition::Periodic, "requires periodic boundary conditions");
      need(params.a_bar > 0.0, "a_bar must be positive");
      break;
    default:
      need(bc == BoundaryCondition::Periodic, "requires periodic boundary conditions");
      break;
  }
}

ScenarioConfig default_config(Scenario s) {
  ScenarioConfig c;
  c.scenario = s;
  c.output_path = std::string(scenario_name(s));
  c.solver.scheme = Scheme::IMEXDiffusion;
  c.solver.dt = 1e-3;
  c.solver.t_end = 2.0;
  c.solver.save_every = 20;
  c.quadrature = {QuadratureRule::GaussLegendre, 4, 4};
  c.initial.kind = InitialKind::RandomSmooth;
  c.initial.seed = 1;
  c.initial.modes = 4;
  c.initial.amplitude = 1.0;
  switch (s) {
    case Scenario::Classical:
    case Scenario::ChafeeInfante:
      break;
    case Scenario::FrozenWave:
      c.domain_length = kTwoPi;
      c.solver.n = 512;
      c.solver.t_end = 10.0;
      c.solver.save_every = 500;
      c.initial.kind = InitialKind::FourierMix;
      c.initial.terms = {{1, 0.9, 0.0}};
      break;
    case Scenario::RotatingWave:
      c.domain_length = kTwoPi;
      c.solver.n = 512;
      c.solver.dt = 1e-4;
      c.solver.t_end = std::numbers::pi / 2;
      c.solver.save_every = 1000;
      c.params.relax_time = 10.0;
      c.initial.kind = InitialKind::FourierMix;
      c.initial.terms = {{1, 0.9, 0.0}};
      break;
    case Scenario::QLinear:
    case Scenario::GradientQuadratic:
      break;
    case Scenario::PlanarEmbedding:
      c.domain_length = kTwoPi;
      c.solver.n = 1024;
      c.solver.dt = 1.25e-3;
      c.solver.t_end = 1.0;  // replaced by periods * T
      c.solver.save_every = 100;
      c.initial.kind = InitialKind::FourierMix;
      c.initial.terms = {{1, 0.2, 1.1}};
      break;
    case Scenario::MatanoSeparated:
      c.bc = BoundaryCondition::Dirichlet;
      c.params.lambda = 5.0;
      c.params.epsilon = 0.5;
      c.solver.scheme = Scheme::RK4Explicit;
      c.solver.dt = 0.0;
      c.solver.t_end = 0.004;
      c.solver.save_every = 8;
      c.quadrature = {QuadratureRule::CompositeSimpson, 8, 8};
      c.initial.seed = 7;
      c.initial.modes = 3;
      c.initial.amplitude = 0.25;
      c.initial.taper = 8;
      break;
  }
  return c;
}

std::string emit_config(const ScenarioConfig& cfg) { return to_json(cfg).dump(2) + "\n"; }

ScenarioConfig parse_config(std::string_view json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config: invalid JSON: ") + e.what());
  }
  try {
    return from_json(j);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
}

ScenarioConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

ScenarioConfig with_parameter(const ScenarioConfig& cfg, const std::string& key,
                              const std::string& value) {
  json j = to_json(cfg);
  std::string pointer = "/" + key;
  std::replace(pointer.begin(), pointer.end(), '.', '/');
  const json::json_pointer ptr(pointer);
  if (key.empty() || !j.contains(ptr)) throw ConfigError("unknown parameter '" + key + "'");
  json& slot = j[ptr];
  try {
    std::size_t used = 0;
    if (slot.is_number_unsigned()) {
      slot = std::stoull(value, &used);
    } else if (slot.is_number_integer()) {
      slot = std::stoll(value, &used);
    } else if (slot.is_number_float()) {
      slot = std::stod(value, &used);
    } else if (slot.is_string()) {
      slot = value;
      used = value.size();
    } else {
      throw ConfigError("parameter '" + key + "' cannot be set from the command line");
    }
    if (used != value.size()) throw std::invalid_argument("trailing characters");
  } catch (const std::logic_error&) {
    throw ConfigError("parameter '" + key + "': cannot parse '" + value + "'");
  }
  return from_json(j);
}

GeneralNonlinearity scenario_nonlinearity(const ScenarioConfig& cfg) {
  const auto& p = cfg.params;
  switch (cfg.scenario) {
    case Scenario::RotatingWave: {
      const double lambda = p.lambda, c = p.c;
      return {[=](double, double u, double q) { return lambda * u * (1.0 - u * u) - c * q; },
              [c](double, double, double) { return -c; }, true, "rotating-wave"};
    }
    case Scenario::PlanarEmbedding:
      return embed_planar(center_field());
    case Scenario::MatanoSeparated: {
      const double lambda = p.lambda, eps = p.epsilon;
      return {[=](double, double u, double q) { return lambda * u * (1.0 - u * u) + eps * q; },
              [eps](double, double, double) { return eps; }, false, "matano-separated"};
    }
    default: {
      auto g = from_o2(scenario_o2(cfg));
      g.x_periodic = true;
      return g;
    }
  }
}

ShiftMatch best_shift(const ScalarField& earlier, const ScalarField& later, double expected_theta) {
  if (earlier.size() != later.size() || earlier.bc != BoundaryCondition::Periodic ||
      later.bc != BoundaryCondition::Periodic) {
    throw ConfigError("best_shift: needs two periodic fields on the same grid");
  }
  const std::size_t n = earlier.size();
  ShiftMatch best{std::numeric_limits<double>::infinity(), 0.0, 0};
  for (std::size_t s = 0; s < n; ++s) {
    double err = 0.0;
    for (std::size_t i = 0; i < n && err < best.error; ++i) {
      err = std::max(err, std::abs(later.values[i] - earlier.values[(i + n - s) % n]));
    }
    if (err < best.error) {
      best.error = err;
      best.shift = static_cast<long>(s);
    }
  }
  const double len = earlier.domain_length;
  const double base = static_cast<double>(best.shift) * earlier.spacing();
  best.theta = base + len * std::round((expected_theta - base) / len);
  return best;
}

ScenarioResult run_scenario(const ScenarioConfig& cfg_in) {
  cfg_in.validate();
  ScenarioResult out;
  out.config = cfg_in;
  ScenarioConfig cfg = cfg_in;
  out.has_lyapunov_function =
      cfg.scenario != Scenario::RotatingWave && cfg.scenario != Scenario::PlanarEmbedding;

  const auto fail = [&](const std::exception& e, ExitCode code) {
    if (out.exit_code == ExitCode::Ok) out.exit_code = code;
    if (out.error_kind.empty()) {
      out.error_kind = error_kind(e);
      out.error_message = e.what();
    }
  };

  GeneralNonlinearity nl;
  ScalarField u0;
  std::vector<double> oracle_times;
  try {
    nl = scenario_nonlinearity(cfg);
    u0 = make_initial(cfg.initial, cfg.solver.n, cfg.domain_length, cfg.bc);

    if (cfg.scenario == Scenario::RotatingWave && cfg.params.relax_time > 0.0) {
      ScenarioConfig still = cfg;
      still.params.c = 0.0;
      SolverConfig relax;
      relax.n = cfg.solver.n;
      relax.dt = 1e-3;
      relax.t_end = cfg.params.relax_time;
      relax.save_every = std::numeric_limits<int>::max();
      relax.scheme = Scheme::IMEXDiffusion;
      const auto rec = integrate(scenario_nonlinearity(still), std::nullopt, u0, relax);
      if (rec.status == RunStatus::BlowUp) {
        out.exit_code = ExitCode::BlowUp;
        out.error_kind = "blow-up";
        out.error_message = "relaxation run blew up";
        return out;
      }
      u0 = rec.snapshots.back();
      out.summary["relaxed_ut_inf"] = max_abs(rec.u_t_snapshots.back().values);
    }

    if (cfg.scenario == Scenario::PlanarEmbedding) {
      const auto [a0, b0] = fourier_project(u0, 1);
      if (!(b0 > 0.0)) throw ConfigError("planar-embedding: initial data need b > 0");
      const double period = planar_period(center_field(), a0, b0, 0.0, 1.0);
      out.summary["period"] = period;
      cfg.solver.t_end = cfg.params.periods * period;
    }
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    fail(e, ExitCode::ConstructionFailure);
    return out;
  }
  out.summary["t_end"] = cfg.solver.t_end;
  if (cfg.scenario == Scenario::QLinear) cfg.solver.diffusion = cfg.params.a_bar;

  std::optional<PointFunction> coeff;
  out.trajectory = integrate(nl, coeff, u0, cfg.solver);
  const auto& tr = out.trajectory;
  if (tr.status == RunStatus::BlowUp) {
    out.exit_code = ExitCode::BlowUp;
    out.error_kind = "blow-up";
    std::ostringstream os;
    os << "solution blew up at t = " << tr.blowup_time;
    out.error_message = os.str();
    out.summary["blowup_time"] = tr.blowup_time;
  }

  const std::size_t saves = tr.times.size();
  auto& s = out.series;
  for (auto* v : {&s.V, &s.dissipation, &s.residual, &s.convexity_min}) v->assign(saves, kNaN);
  s.ut_inf.resize(saves);
  for (std::size_t k = 0; k < saves; ++k) s.ut_inf[k] = max_abs(tr.u_t_snapshots[k].values);
  if (saves == 0) return out;
  out.summary["final_ut_inf"] = s.ut_inf.back();
  out.summary["final_range"] = range_of(tr.snapshots.back().values);

  if (is_two_pi_circle(cfg)) {
    for (std::size_t k = 0; k < saves; ++k) {
      const auto [a, b] = fourier_project(tr.snapshots[k], 1);
      s.mode_a.push_back(a);
      s.mode_b.push_back(b);
    }
  }

  try {
    switch (cfg.scenario) {
      case Scenario::Classical: {
        const double lambda = cfg.params.lambda;
        const LagrangianDensity energy{
            [lambda](double, double u, double p) {
              return 0.5 * p * p - lambda * (0.5 * u * u - 0.25 * u * u * u * u);
            },
            [](double, double, double) { return 1.0; }};
        monitor_lyapunov(energy, {}, tr, out);
        break;
      }
      case Scenario::ChafeeInfante:
      case Scenario::FrozenWave:
      case Scenario::GradientQuadratic: {
        LagrangianEvaluator ev(scenario_o2(cfg), cfg.charflow, cfg.quadrature, cfg.form);
        monitor_lyapunov(density_of(ev), {}, tr, out);
        break;
      }
      case Scenario::QLinear: {
        const double a_bar = cfg.params.a_bar;
        const NonlinearityO2 diffusion{[a_bar](double, double) { return a_bar; },
                                       [](double, double) { return 0.0; }, "constant"};
        LagrangianEvaluator ev(effective_nonlinearity(scenario_o2(cfg), diffusion), cfg.charflow,
                               cfg.quadrature, cfg.form);
        monitor_lyapunov(density_of(ev),
                         [a_bar](double, double, double) { return a_bar; }, tr, out);
        break;
      }
      case Scenario::MatanoSeparated: {
        SeparatedLagrangian lag(nl, cfg.charflow, cfg.quadrature);
        monitor_lyapunov(lag.density(), {}, tr, out);
        break;
      }
      case Scenario::RotatingWave: {
        const double t = tr.times.back();
        const auto match = best_shift(tr.snapshots.front(), tr.snapshots.back(), cfg.params.c * t);
        out.summary["shift_error"] = match.error;
        out.summary["shift_theta"] = match.theta;
        out.summary["measured_speed"] = match.theta / t;
        if (cfg.params.c != 0.0) out.summary["speed_ratio"] = match.theta / (t * cfg.params.c);
        break;
      }
      case Scenario::PlanarEmbedding: {
        const auto orbit =
            integrate_planar(center_field(), s.mode_a.front(), s.mode_b.front(),
                             std::vector<double>(tr.times.begin() + 1, tr.times.end()));
        s.oracle_a = {s.mode_a.front()};
        s.oracle_b = {s.mode_b.front()};
        s.oracle_a.insert(s.oracle_a.end(), orbit.a.begin(), orbit.a.end());
        s.oracle_b.insert(s.oracle_b.end(), orbit.b.begin(), orbit.b.end());
        double fourier_err = 0.0, off_mode = 0.0, energy_drift = 0.0;
        const double h0 = center_energy(s.oracle_a.front(), s.oracle_b.front());
        for (std::size_t k = 0; k < saves; ++k) {
          fourier_err = std::max({fourier_err, std::abs(s.mode_a[k] - s.oracle_a[k]),
                                  std::abs(s.mode_b[k] - s.oracle_b[k])});
          off_mode = std::max(off_mode, off_mode_residual(tr.snapshots[k], 1) /
                                            max_abs(tr.snapshots[k].values));
          energy_drift =
              std::max(energy_drift, std::abs(center_energy(s.oracle_a[k], s.oracle_b[k]) - h0));
        }
        std::vector<double> diff(tr.snapshots.back().values);
        for (std::size_t i = 0; i < diff.size(); ++i) diff[i] -= tr.snapshots.front().values[i];
        out.summary["fourier_max_error"] = fourier_err;
        out.summary["off_mode_max_relative"] = off_mode;
        out.summary["oracle_energy_drift"] = energy_drift;
        out.summary["period_return_relative"] =
            max_abs(diff) / max_abs(tr.snapshots.front().values);
        break;
      }
    }
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    fail(e, ExitCode::ConstructionFailure);
  }
  return out;
}

}  // namespace o2lyap
