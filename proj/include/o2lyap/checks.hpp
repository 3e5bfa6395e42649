#pragma once

// Quick invariant suite behind the `check` command.

#include <string>
#include <vector>

namespace o2lyap {

struct CheckResult {
  std::string name;
  bool passed = false;
  /// Measured quantity against its threshold, or the error text.
  std::string detail;
};

/// Runs every built-in check; each is self-contained and takes well under a second.
std::vector<CheckResult> run_checks();

}  // namespace o2lyap
