#pragma once

// Files written for a run: series.csv, snapshots.csv and manifest.json, all
// carrying a format_version field. Numbers are printed with 17 significant
// digits and no timestamps are recorded, so identical runs give identical files.

#include <filesystem>
#include <string>
#include <vector>

#include "o2lyap/field.hpp"
#include "o2lyap/scenario.hpp"

namespace o2lyap {

inline constexpr int kFormatVersion = 1;
inline constexpr const char* kOutputRootVariable = "O2LYAP_OUTPUT_ROOT";

/// $O2LYAP_OUTPUT_ROOT, or "o2lyap-output" in the working directory.
std::filesystem::path output_root();

/// Directory of a run: output_root() / cfg.output_path (absolute paths are kept).
std::filesystem::path run_directory(const ScenarioConfig& cfg);

/// Writes the three run files into `dir` (created if needed) and returns their paths.
std::vector<std::filesystem::path> write_run(const ScenarioResult& result,
                                             const std::filesystem::path& dir);

/// Manifest for a run (also used for runs that failed before producing data).
std::string manifest_json(const ScenarioResult& result);

/// Reads one snapshot from a snapshots.csv file: the one at `time` (exact
/// match up to 1e-12) or the last one when time < 0.
/// Throws ConfigError if the file is missing, malformed or of another format version.
struct Snapshot {
  double t = 0.0;
  std::vector<double> x;
  std::vector<double> u;
};
Snapshot read_snapshot(const std::filesystem::path& file, double time = -1.0);

/// Shortest round-trip representation used in all outputs.
std::string format_number(double v);

}  // namespace o2lyap
