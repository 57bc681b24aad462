#pragma once

// Self-test battery: one property check per acceptance criterion.

#include <string>
#include <vector>

namespace qloc {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
};

struct BatteryOptions {
  /// Full sample counts; the quick battery uses reduced counts.
  bool full = true;
  /// Criterion ids to run; empty runs all of them.
  std::vector<int> only;
};

std::vector<std::string> criterion_names();

CriterionResult run_criterion(int id, const BatteryOptions& options);
std::vector<CriterionResult> run_battery(const BatteryOptions& options);

/// "PASS  3 local map identity (0.41 s): detail"
std::string format_result(const CriterionResult& r);

}  // namespace qloc
