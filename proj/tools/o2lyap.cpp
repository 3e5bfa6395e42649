// Command-line front end: run, sweep, check, list-scenarios, default-config.
//
// Exit codes: 0 success, 1 usage or I/O error, 2 blow-up,
// 3 construction failure (invalid configuration or a failed Lagrangian).

#include <algorithm>
#include <future>
#include <iostream>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "o2lyap/checks.hpp"
#include "o2lyap/errors.hpp"
#include "o2lyap/output.hpp"
#include "o2lyap/scenario.hpp"

using namespace o2lyap;

namespace {

int severity(ExitCode c) {
  switch (c) {
    case ExitCode::Ok: return 0;
    case ExitCode::BlowUp: return 1;
    case ExitCode::ConstructionFailure: return 2;
    case ExitCode::Failure: return 3;
  }
  return 3;
}

void print_summary(const ScenarioResult& r, const std::filesystem::path& dir, std::ostream& os) {
  os << scenario_name(r.config.scenario) << ": " << (r.exit_code == ExitCode::Ok ? "ok" : r.error_kind)
     << " (" << r.trajectory.times.size() << " saves) -> " << dir.string() << "\n";
  if (!r.error_message.empty()) os << "  " << r.error_message << "\n";
  for (const auto& [k, v] : r.summary) os << "  " << k << " = " << format_number(v) << "\n";
}

ExitCode execute(const ScenarioConfig& cfg, bool quiet, std::ostream& os) {
  const ScenarioResult r = run_scenario(cfg);
  const auto dir = run_directory(cfg);
  write_run(r, dir);
  if (!quiet) print_summary(r, dir, os);
  return r.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Lyapunov functions for O(2)-equivariant parabolic equations on the circle"};
  app.require_subcommand(1);

  std::string config_path;
  bool quiet = false;
  auto* run = app.add_subcommand("run", "Run one scenario from a JSON config file");
  run->add_option("config", config_path, "Config file")->required()->check(CLI::ExistingFile);
  run->add_flag("-q,--quiet", quiet, "Do not print the run summary");

  std::string param;
  std::vector<std::string> values;
  unsigned jobs = std::max(1u, std::thread::hardware_concurrency());
  auto* sweep = app.add_subcommand("sweep", "Run a scenario for several values of one parameter");
  sweep->add_option("config", config_path, "Config file")->required()->check(CLI::ExistingFile);
  sweep->add_option("--param", param, "Dotted key, e.g. params.lambda or solver.n")->required();
  sweep->add_option("--values", values, "Comma-separated values")->required()->delimiter(',');
  sweep->add_option("-j,--jobs", jobs, "Parallel runs")->check(CLI::PositiveNumber);
  sweep->add_flag("-q,--quiet", quiet, "Do not print run summaries");

  auto* check = app.add_subcommand("check", "Run the built-in invariant suite");
  auto* list = app.add_subcommand("list-scenarios", "List the available scenarios");

  std::string scenario;
  auto* defaults = app.add_subcommand("default-config", "Print the default config of a scenario");
  defaults->add_option("scenario", scenario, "Scenario name")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) {
      return static_cast<int>(execute(load_config(config_path), quiet, std::cout));
    }

    if (*sweep) {
      const ScenarioConfig base = load_config(config_path);
      const std::string base_path = base.output_path.empty()
                                        ? std::string(scenario_name(base.scenario))
                                        : base.output_path;
      std::vector<ScenarioConfig> configs;
      for (const auto& v : values) {
        ScenarioConfig c = with_parameter(base, param, v);
        c.output_path = (std::filesystem::path(base_path) / (param + "=" + v)).string();
        configs.push_back(c);
      }
      // Each run is single threaded and writes its own directory; logs are
      // buffered per run and printed in the order of --values.
      std::vector<std::ostringstream> logs(configs.size());
      std::vector<ExitCode> codes(configs.size(), ExitCode::Ok);
      for (std::size_t start = 0; start < configs.size(); start += jobs) {
        std::vector<std::future<void>> batch;
        for (std::size_t i = start; i < std::min(configs.size(), start + jobs); ++i) {
          batch.push_back(std::async(std::launch::async, [&, i] {
            try {
              codes[i] = execute(configs[i], quiet, logs[i]);
            } catch (const std::exception& e) {
              logs[i] << param << "=" << values[i] << ": " << e.what() << "\n";
              codes[i] = dynamic_cast<const ConfigError*>(&e) ? ExitCode::ConstructionFailure
                                                             : ExitCode::Failure;
            }
          }));
        }
        for (auto& f : batch) f.get();
      }
      ExitCode worst = ExitCode::Ok;
      for (std::size_t i = 0; i < configs.size(); ++i) {
        std::cout << logs[i].str();
        if (severity(codes[i]) > severity(worst)) worst = codes[i];
      }
      return static_cast<int>(worst);
    }

    if (*check) {
      bool all = true;
      for (const auto& r : run_checks()) {
        std::cout << (r.passed ? "PASS " : "FAIL ") << r.name << ": " << r.detail << "\n";
        all = all && r.passed;
      }
      return all ? 0 : 1;
    }

    if (*list) {
      for (Scenario s : all_scenarios()) {
        std::cout << scenario_name(s) << "\t" << scenario_summary(s) << "\n";
      }
      return 0;
    }

    if (*defaults) {
      std::cout << emit_config(default_config(scenario_from_name(scenario)));
      return 0;
    }
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return static_cast<int>(ExitCode::ConstructionFailure);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return static_cast<int>(ExitCode::Failure);
  }
  return 0;
}
