/// @file checks.hpp
/// @brief Named structural properties behind `sdc check`.

#pragma once

#include <functional>
#include <string>
#include <vector>

#include "sdc/forms.hpp"

namespace sdc {

struct CheckResult {
  std::string name;
  bool pass = false;
  std::string detail;  // measured value against its threshold
};

/// Problem the operator-level properties run on. `mutate`, when set, is
/// applied to the assembled operators before any property sees them; tests
/// use it to inject faults.
struct CheckFixture {
  int n = 2;
  PhysicalParams params;
  double k1 = 1.0, k2 = 1e-2, theta = 0.3;
  unsigned seed = 2024;
  bool include_stability = true;  // the unconditional-stability witness marches to T = 10
  std::function<void(SystemOperators&)> mutate;
};

std::vector<std::string> check_names(const CheckFixture& fixture = {});

/// Runs every property in a fixed order.
std::vector<CheckResult> run_checks(const CheckFixture& fixture = {});

/// Runs the single property `name`; throws std::out_of_range if unknown.
CheckResult run_check(const std::string& name, const CheckFixture& fixture = {});

}  // namespace sdc
