#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

#include "doctest.h"
#include "o2lyap/checks.hpp"
#include "o2lyap/errors.hpp"
#include "o2lyap/fourier.hpp"
#include "o2lyap/initial.hpp"
#include "o2lyap/output.hpp"
#include "o2lyap/planar.hpp"
#include "o2lyap/scenario.hpp"
#include "json.hpp"

using namespace o2lyap;
namespace fs = std::filesystem;

namespace {

constexpr double kPi = std::numbers::pi;

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("o2lyap-test-" + name);
  fs::remove_all(dir);
  return dir;
}

ScenarioConfig small_chafee_infante() {
  ScenarioConfig cfg = default_config(Scenario::ChafeeInfante);
  cfg.solver.n = 32;
  cfg.solver.t_end = 0.05;
  cfg.solver.save_every = 10;
  return cfg;
}

}  // namespace

TEST_SUITE("harness") {

TEST_CASE("planar embedding") {
  const auto pf = center_field();
  CHECK(reflection_symmetry_defect(pf) <= 1e-15);

  SUBCASE("f(-x, u, -p) = f(x, u, p) and the plane is invariant") {
    const auto f = embed_planar(pf);
    // On u = a cos x + b sin x the PDE reduces to a' cos x + b' sin x.
    const double a = 0.4, b = 1.3;
    for (double x : {0.0, 0.7, 2.5, 4.0}) {
      const double u = a * std::cos(x) + b * std::sin(x);
      const double p = -a * std::sin(x) + b * std::cos(x);
      const double uxx = -u;
      const double ut = uxx + f.f(x, u, p);
      CHECK(ut == doctest::Approx(pf.g(a, b) * std::cos(x) + pf.h(a, b) * std::sin(x)).epsilon(1e-13));
      CHECK(f.f(-x, u, -p) == doctest::Approx(f.f(x, u, p)).epsilon(1e-14));
    }
  }
  SUBCASE("g = h = 0 gives f = u") {
    const PlanarField zero{[](double, double) { return 0.0; }, [](double, double) { return 0.0; }, {}};
    const auto f = embed_planar(zero);
    for (double x : {0.3, 1.9}) CHECK(f.f(x, 0.8, -0.4) == doctest::Approx(0.8).epsilon(1e-14));
  }
  SUBCASE("asymmetric fields are refused") {
    const PlanarField skew{[](double, double b) { return b; }, [](double, double) { return 0.0; }, {}};
    CHECK(reflection_symmetry_defect(skew) > 0.1);
    CHECK_THROWS_AS(embed_planar(skew), ConfigError);
  }
}

TEST_CASE("centre field: energy conservation and closed orbits") {
  const auto pf = center_field();
  std::vector<double> times;
  for (int k = 0; k <= 40; ++k) times.push_back(0.25 * k);
  const auto orbit = integrate_planar(pf, 0.2, 1.1, times);
  const double H0 = center_energy(0.2, 1.1);
  double drift = 0.0;
  for (std::size_t k = 0; k < times.size(); ++k) {
    drift = std::max(drift, std::abs(center_energy(orbit.a[k], orbit.b[k]) - H0));
  }
  CHECK(drift <= 1e-8);

  const double T = planar_period(pf, 0.2, 1.1, 0.0, 1.0);
  // Linearisation at (0, 1) has eigenvalues +-i, so small orbits have period near 2 pi.
  CHECK(T > 2 * kPi);
  CHECK(T < 2 * kPi * 1.1);
  const auto back = integrate_planar(pf, 0.2, 1.1, {T});
  CHECK(std::hypot(back.a[0] - 0.2, back.b[0] - 1.1) <= 1e-6);
  const double T_small = planar_period(pf, 0.0, 1.01, 0.0, 1.0);
  CHECK(T_small == doctest::Approx(2 * kPi).epsilon(1e-3));
}

TEST_CASE("Fourier projection") {
  ScalarField f;
  f.domain_length = 2 * kPi;
  f.values.resize(128);
  for (std::size_t i = 0; i < f.size(); ++i) {
    const double x = f.x(i);
    f.values[i] = 0.7 * std::cos(x) - 1.2 * std::sin(x) + 0.1 * std::sin(3 * x) + 0.5;
  }
  const auto [a, b] = fourier_project(f, 1);
  CHECK(a == doctest::Approx(0.7).epsilon(1e-13));
  CHECK(b == doctest::Approx(-1.2).epsilon(1e-13));
  CHECK(fourier_project(f, 3).second == doctest::Approx(0.1).epsilon(1e-12));
  CHECK(off_mode_residual(f, 1) == doctest::Approx(0.6).epsilon(1e-3));

  ScalarField pure = f;
  for (std::size_t i = 0; i < f.size(); ++i) pure.values[i] = 2.0 * std::sin(f.x(i));
  CHECK(off_mode_residual(pure, 1) <= 1e-14);

  ScalarField wrong = f;
  wrong.domain_length = 1.0;
  CHECK_THROWS_AS(fourier_project(wrong, 1), ConfigError);
  CHECK_THROWS_AS(fourier_project(f, 0), ConfigError);
}

TEST_CASE("initial data generators") {
  SUBCASE("Fourier mix on each boundary condition") {
    InitialCondition ic;
    ic.kind = InitialKind::FourierMix;
    ic.offset = 0.2;
    ic.terms = {{1, 0.5, 0.0}, {2, 0.0, 0.3}};
    const auto p = make_initial(ic, 64, 2.0, BoundaryCondition::Periodic);
    for (std::size_t i = 0; i < p.size(); ++i) {
      const double x = p.x(i);
      CHECK(p.values[i] == doctest::Approx(0.2 + 0.5 * std::cos(kPi * x) + 0.3 * std::sin(2 * kPi * x)));
    }
    InitialCondition d;
    d.kind = InitialKind::FourierMix;
    d.terms = {{2, 0.0, 1.0}};
    const auto df = make_initial(d, 33, 1.0, BoundaryCondition::Dirichlet);
    CHECK(df.values.front() == 0.0);
    CHECK(df.values.back() == 0.0);
    CHECK(df.values[8] == doctest::Approx(1.0));  // x = 1/4
    CHECK_THROWS_AS(make_initial(ic, 33, 1.0, BoundaryCondition::Dirichlet), ConfigError);
  }
  SUBCASE("taper keeps the Dirichlet data flat at the ends") {
    InitialCondition d;
    d.kind = InitialKind::FourierMix;
    d.terms = {{1, 0.0, 1.0}};
    d.taper = 8;
    const auto f = make_initial(d, 65, 1.0, BoundaryCondition::Dirichlet);
    CHECK(f.values[32] == doctest::Approx(1.0));
    CHECK(std::abs(f.values[1]) <= std::pow(std::sin(kPi / 64), 9) * 1.01);
  }
  SUBCASE("random smooth data depend only on the seed") {
    InitialCondition ic;
    const auto a = make_initial(ic, 64, 1.0, BoundaryCondition::Periodic);
    const auto b = make_initial(ic, 64, 1.0, BoundaryCondition::Periodic);
    CHECK(a.values == b.values);
    ic.seed = 2;
    CHECK(make_initial(ic, 64, 1.0, BoundaryCondition::Periodic).values != a.values);
    double mean = 0.0;
    for (double v : a.values) mean += v;
    CHECK(std::abs(mean / 64.0) <= 1e-12);  // no constant mode
  }
}

TEST_CASE("configuration round trip and strict parsing") {
  for (Scenario s : all_scenarios()) {
    CAPTURE(std::string(scenario_name(s)));
    const ScenarioConfig c = default_config(s);
    CHECK_NOTHROW(c.validate());
    CHECK(scenario_from_name(scenario_name(s)) == s);
    const std::string text = emit_config(c);
    const ScenarioConfig back = parse_config(text);
    CHECK(back == c);
    CHECK(emit_config(back) == text);
  }
  CHECK_THROWS_AS(scenario_from_name("nope"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"scenario": "classical", "bogus": 1})"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"scenario": "classical", "solver": {"nn": 1}})"), ConfigError);
  CHECK_THROWS_AS(parse_config("{"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"params": {}})"), ConfigError);

  const auto partial = parse_config(R"({"scenario": "frozen-wave", "params": {"lambda": 4}})");
  auto expected = default_config(Scenario::FrozenWave);
  expected.params.lambda = 4.0;
  CHECK(partial == expected);
}

TEST_CASE("scenario validation") {
  auto cfg = default_config(Scenario::PlanarEmbedding);
  cfg.domain_length = 1.0;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg = default_config(Scenario::MatanoSeparated);
  cfg.bc = BoundaryCondition::Periodic;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg = default_config(Scenario::ChafeeInfante);
  cfg.solver.diffusion = 2.0;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  CHECK_THROWS_AS(run_scenario(cfg), ConfigError);
}

TEST_CASE("with_parameter") {
  const auto base = default_config(Scenario::ChafeeInfante);
  CHECK(with_parameter(base, "params.lambda", "7.5").params.lambda == 7.5);
  CHECK(with_parameter(base, "solver.n", "128").solver.n == 128);
  CHECK(with_parameter(base, "initial.seed", "42").initial.seed == 42u);
  CHECK(with_parameter(base, "output_path", "x/y").output_path == "x/y");
  CHECK_THROWS_AS(with_parameter(base, "solver.n", "12.5"), ConfigError);
  CHECK_THROWS_AS(with_parameter(base, "params.nothing", "1"), ConfigError);
  CHECK_THROWS_AS(with_parameter(base, "", "1"), ConfigError);
}

TEST_CASE("best_shift recovers a grid rotation") {
  ScalarField f;
  f.domain_length = 2 * kPi;
  f.values.resize(64);
  for (std::size_t i = 0; i < 64; ++i) f.values[i] = std::exp(std::cos(f.x(i)));
  ScalarField g = f;
  std::rotate(g.values.rbegin(), g.values.rbegin() + 5, g.values.rend());  // g(x) = f(x - 5h)
  const auto m = best_shift(f, g, 0.4);
  CHECK(m.error == 0.0);
  CHECK(m.theta == doctest::Approx(5 * f.spacing()));
  const auto wrapped = best_shift(f, g, 5 * f.spacing() + 2 * kPi);
  CHECK(wrapped.theta == doctest::Approx(5 * f.spacing() + 2 * kPi));
}

TEST_CASE("run output is deterministic and versioned") {
  auto cfg = small_chafee_infante();
  const auto r1 = run_scenario(cfg);
  const auto r2 = run_scenario(cfg);
  REQUIRE(r1.exit_code == ExitCode::Ok);
  const auto d1 = scratch("det1"), d2 = scratch("det2");
  const auto files1 = write_run(r1, d1);
  const auto files2 = write_run(r2, d2);
  REQUIRE(files1.size() == 3);
  for (std::size_t k = 0; k < files1.size(); ++k) {
    CHECK(files1[k].filename() == files2[k].filename());
    CHECK(slurp(files1[k]) == slurp(files2[k]));
  }
  const auto manifest = nlohmann::json::parse(slurp(d1 / "manifest.json"));
  CHECK(manifest["format_version"] == kFormatVersion);
  CHECK(manifest["exit_code"] == 0);
  CHECK(manifest["error"].is_null());
  const std::string series = slurp(d1 / "series.csv");
  CHECK(series.rfind("format_version,t,V,", 0) == 0);
  CHECK(series.find("\n1,0,") != std::string::npos);

  SUBCASE("snapshot import round trip") {
    const auto snap = read_snapshot(d1 / "snapshots.csv");
    CHECK(snap.t == r1.trajectory.times.back());
    CHECK(snap.u == r1.trajectory.snapshots.back().values);
    const auto first = read_snapshot(d1 / "snapshots.csv", 0.0);
    CHECK(first.u == r1.trajectory.snapshots.front().values);
    CHECK_THROWS_AS(read_snapshot(d1 / "snapshots.csv", 0.123), ConfigError);
    CHECK_THROWS_AS(read_snapshot(d1 / "missing.csv"), ConfigError);

    InitialCondition ic;
    ic.kind = InitialKind::Import;
    ic.path = (d1 / "snapshots.csv").string();
    CHECK(make_initial(ic, 32, 1.0, BoundaryCondition::Periodic).values == snap.u);
    CHECK_THROWS_AS(make_initial(ic, 64, 1.0, BoundaryCondition::Periodic), ConfigError);
  }
  fs::remove_all(d1);
  fs::remove_all(d2);
}

TEST_CASE("number formatting round trips") {
  for (double v : {0.1, 1.0 / 3.0, -2.5e-300, 6.02e23, 0.0}) {
    CHECK(std::stod(format_number(v)) == v);
  }
  CHECK(format_number(NAN) == "nan");
}

TEST_CASE("output root follows the environment") {
  ::setenv(kOutputRootVariable, "/tmp/o2lyap-root", 1);
  auto cfg = small_chafee_infante();
  cfg.output_path = "a/b";
  CHECK(run_directory(cfg) == fs::path("/tmp/o2lyap-root/a/b"));
  ::unsetenv(kOutputRootVariable);
  CHECK(output_root() == fs::path("o2lyap-output"));
}

TEST_CASE("exit codes: blow-up and construction failure") {
  SUBCASE("unstable explicit step blows up") {
    auto cfg = small_chafee_infante();
    cfg.solver.scheme = Scheme::RK4Explicit;
    cfg.solver.dt = 0.01;
    const auto r = run_scenario(cfg);
    CHECK(r.exit_code == ExitCode::BlowUp);
    CHECK(r.error_kind == "blow-up");
    CHECK(r.summary.count("blowup_time") == 1);
    CHECK(!r.trajectory.warnings.empty());
  }
  SUBCASE("characteristic escape") {
    auto cfg = small_chafee_infante();
    cfg.charflow.escape_bound = 1e-6;
    const auto r = run_scenario(cfg);
    CHECK(r.exit_code == ExitCode::ConstructionFailure);
    CHECK(r.error_kind == "grid-evaluation");
    const auto manifest = nlohmann::json::parse(manifest_json(r));
    CHECK(manifest["exit_code"] == 3);
    CHECK(manifest["error"]["kind"] == "grid-evaluation");
  }
}

TEST_CASE("quick checks all pass") {
  for (const auto& c : run_checks()) {
    CAPTURE(c.name);
    CAPTURE(c.detail);
    CHECK(c.passed);
  }
}

}  // TEST_SUITE
