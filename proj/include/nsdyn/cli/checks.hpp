#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "nsdyn/cli/config.hpp"

namespace nsdyn::cli {

struct CheckResult {
  std::string name;
  bool pass = false;
  std::string detail;
};

/// Module-level property suites applicable to the loaded system, plus the
/// system-independent ones (eigenvalue residuals, Newton tail, Hausdorff
/// metric axioms, polar identity) driven by `seed`.
std::vector<CheckResult> run_checks(const SystemConfig& cfg, std::uint64_t seed = 42);

}  // namespace nsdyn::cli
