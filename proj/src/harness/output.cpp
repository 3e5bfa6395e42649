#include "o2lyap/output.hpp"

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "o2lyap/errors.hpp"

namespace o2lyap {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

// FNV-1a, enough to tell configurations apart in a manifest.
std::string fnv1a_hex(const std::string& text) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 0x100000001b3ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

ordered_json number_or_null(double v) {
  return std::isfinite(v) ? ordered_json(v) : ordered_json(nullptr);
}

std::string status_name(ExitCode code) {
  switch (code) {
    case ExitCode::Ok: return "completed";
    case ExitCode::BlowUp: return "blow-up";
    case ExitCode::ConstructionFailure: return "construction-failure";
    case ExitCode::Failure: return "failure";
  }
  return "failure";
}

void write_text(const fs::path& file, const std::string& text) {
  std::ofstream out(file, std::ios::binary);
  if (!out) throw Error("cannot write '" + file.string() + "'");
  out << text;
  if (!out) throw Error("failed while writing '" + file.string() + "'");
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, sep)) out.push_back(cell);
  if (!line.empty() && line.back() == sep) out.emplace_back();
  return out;
}

double parse_double(const std::string& s, const fs::path& file) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw ConfigError("malformed number '" + s + "' in " + file.string());
  }
  return v;
}

}  // namespace

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ec == std::errc() ? ptr : buf);
}

fs::path output_root() {
  const char* env = std::getenv(kOutputRootVariable);
  return (env && *env) ? fs::path(env) : fs::path("o2lyap-output");
}

fs::path run_directory(const ScenarioConfig& cfg) {
  const fs::path sub = cfg.output_path.empty() ? fs::path(std::string(scenario_name(cfg.scenario)))
                                                : fs::path(cfg.output_path);
  return sub.is_absolute() ? sub : output_root() / sub;
}

std::string manifest_json(const ScenarioResult& r) {
  const std::string config_text = emit_config(r.config);
  ordered_json summary = ordered_json::object();
  for (const auto& [k, v] : r.summary) summary[k] = number_or_null(v);
  ordered_json warnings = ordered_json::array();
  for (const auto& w : r.trajectory.warnings) warnings.push_back(w);

  ordered_json m;
  m["format_version"] = kFormatVersion;
  m["program"] = "o2lyap";
  m["scenario"] = std::string(scenario_name(r.config.scenario));
  m["status"] = status_name(r.exit_code);
  m["exit_code"] = static_cast<int>(r.exit_code);
  m["error"] = r.error_kind.empty()
                   ? ordered_json(nullptr)
                   : ordered_json{{"kind", r.error_kind}, {"message", r.error_message}};
  m["lyapunov_monitor"] = r.has_lyapunov_function;
  m["config_hash"] = fnv1a_hex(config_text);
  m["config"] = ordered_json::parse(config_text);
  m["saves"] = r.trajectory.times.size();
  m["summary"] = summary;
  m["warnings"] = warnings;
  m["files"] = {"series.csv", "snapshots.csv"};
  return m.dump(2) + "\n";
}

std::vector<fs::path> write_run(const ScenarioResult& r, const fs::path& dir) {
  fs::create_directories(dir);
  const auto& s = r.series;
  const auto& tr = r.trajectory;
  const bool modes = !s.mode_a.empty();
  const bool oracle = !s.oracle_a.empty();

  std::ostringstream series;
  series << "format_version,t,V,dissipation,residual,convexity_min,ut_inf";
  if (modes) series << ",mode1_a,mode1_b";
  if (oracle) series << ",oracle_a,oracle_b";
  series << '\n';
  for (std::size_t k = 0; k < tr.times.size(); ++k) {
    series << kFormatVersion << ',' << format_number(tr.times[k]) << ',' << format_number(s.V[k])
           << ',' << format_number(s.dissipation[k]) << ',' << format_number(s.residual[k]) << ','
           << format_number(s.convexity_min[k]) << ',' << format_number(s.ut_inf[k]);
    if (modes) series << ',' << format_number(s.mode_a[k]) << ',' << format_number(s.mode_b[k]);
    if (oracle) {
      series << ',' << format_number(s.oracle_a[k]) << ',' << format_number(s.oracle_b[k]);
    }
    series << '\n';
  }

  std::ostringstream snaps;
  snaps << "format_version,t,x,u\n";
  for (std::size_t k = 0; k < tr.times.size(); ++k) {
    const auto& f = tr.snapshots[k];
    const std::string t = format_number(tr.times[k]);
    for (std::size_t i = 0; i < f.size(); ++i) {
      snaps << kFormatVersion << ',' << t << ',' << format_number(f.x(i)) << ','
            << format_number(f.values[i]) << '\n';
    }
  }

  const std::vector<fs::path> files{dir / "series.csv", dir / "snapshots.csv",
                                    dir / "manifest.json"};
  write_text(files[0], series.str());
  write_text(files[1], snaps.str());
  write_text(files[2], manifest_json(r));
  return files;
}

Snapshot read_snapshot(const fs::path& file, double time) {
  std::ifstream in(file);
  if (!in) throw ConfigError("cannot open snapshot file '" + file.string() + "'");
  std::string line;
  if (!std::getline(in, line) || line != "format_version,t,x,u") {
    throw ConfigError("'" + file.string() + "' is not a snapshot file");
  }
  Snapshot current, chosen;
  bool have_current = false, found = false;
  const auto close_block = [&] {
    if (!have_current) return;
    if (time < 0.0 || std::abs(current.t - time) <= 1e-12 * std::max(1.0, std::abs(time))) {
      chosen = current;
      found = true;
    }
  };
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto cells = split(line, ',');
    if (cells.size() != 4) throw ConfigError("malformed row in " + file.string());
    if (cells[0] != std::to_string(kFormatVersion)) {
      throw ConfigError("unsupported format_version " + cells[0] + " in " + file.string());
    }
    const double t = parse_double(cells[1], file);
    if (!have_current || t != current.t) {
      close_block();
      current = Snapshot{t, {}, {}};
      have_current = true;
    }
    current.x.push_back(parse_double(cells[2], file));
    current.u.push_back(parse_double(cells[3], file));
  }
  close_block();
  if (!found) throw ConfigError("no matching snapshot in " + file.string());
  return chosen;
}

}  // namespace o2lyap
