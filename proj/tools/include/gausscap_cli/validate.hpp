#pragma once

#include <functional>
#include <string>
#include <vector>

namespace gausscap::cli {

struct CheckResult {
  std::string name;
  double error = 0.0;      ///< achieved |oracle − closed form|, or the violation for inequalities
  double tolerance = 0.0;
  bool passed = false;
  std::string note;        ///< set when the check threw (e.g. cutoff too small)
};

struct ValidationCheck {
  std::string name;
  double tolerance;
  /// Returns the achieved error.
  std::function<double()> run;
};

enum class Preset { quick, full };

Preset parse_preset(const std::string& name);

/// Closed form vs truncated-Fock checks. `cutoff` is used for every Fock
/// computation, so a small cutoff surfaces as failed checks.
std::vector<ValidationCheck> validation_checks(Preset preset, int cutoff);

/// Exceptions become failed checks with a note.
CheckResult run_check(const ValidationCheck& check);

}  // namespace gausscap::cli
