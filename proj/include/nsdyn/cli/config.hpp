#pragma once

// System-definition files:
//
//   [system]
//   kind = piecewise            # piecewise | nsff | ccomb
//   dim = 2
//   h = "x1"
//   xplus = [ "x2-1", "-1" ]
//   xminus = [ "x2", "1" ]
//   # nsff/ccomb: F = [...], G = [...], H = "expr"; ccomb also xtilde = [...]
//
//   [parameters]
//   a = 0.5
//
//   [transition]
//   phi = cubic                 # cubic | quintic | sine | psi
//   a0 = 0                      # psi only, with b0, coord (1-based), amp, width
//
//   [experiment]
//   eps = 0.1,0.05,0.01

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "nsdyn/ccomb.hpp"

namespace nsdyn::cli {

struct TransitionConfig {
  std::string phi = "cubic";
  PsiParams psi;  // coord stored 0-based
  bool operator==(const TransitionConfig& o) const {
    return phi == o.phi && psi.a0 == o.psi.a0 && psi.b0 == o.psi.b0 &&
           psi.coord == o.psi.coord && psi.amp == o.psi.amp && psi.width == o.psi.width;
  }
};

struct SystemConfig {
  std::string name;
  std::string description;
  std::string kind = "piecewise";
  std::size_t dim = 2;
  std::string h;
  std::vector<std::string> xplus, xminus;
  std::vector<std::string> F, G;
  std::string H;
  std::vector<std::string> xtilde;
  std::map<std::string, double, std::less<>> params;
  TransitionConfig transition;
  std::map<std::string, std::string> experiment;

  bool operator==(const SystemConfig&) const = default;

  /// Experiment value or fallback.
  std::string get(const std::string& key, const std::string& fallback = {}) const;
};

SystemConfig parse_config(std::string_view text, const std::string& source = "<config>");
SystemConfig load_config(const std::string& path);
std::string serialize(const SystemConfig& cfg);

std::uint64_t fnv1a64(std::string_view bytes);
std::string config_hash(const SystemConfig& cfg);  // 16 hex digits

// Builders. Expressions are compiled against x1..xn (+ y, eps for nsff and
// ccomb, + lambda for xtilde) and the [parameters] section.
PiecewiseSystem build_piecewise(const SystemConfig& cfg);  // reduced for nsff/ccomb
NonsmoothSlowFast build_nsff(const SystemConfig& cfg);
SlowFastCombination build_ccomb(const SystemConfig& cfg);
/// Continuous combination on the (reduced) piecewise system, if xtilde is set.
ContinuousCombination build_combination(const SystemConfig& cfg);
Transition build_transition(const SystemConfig& cfg);

/// Every expression string of the config, labelled by field.
std::vector<std::pair<std::string, std::string>> all_expressions(const SystemConfig& cfg);

// Value syntax helpers shared with the command line.
std::vector<double> parse_list(const std::string& text);  // "a,b,c" or "a:b:count"
struct RangeSpec {
  std::size_t coord = 0;  // 0-based
  double lo = 0.0, hi = 1.0;
};
RangeSpec parse_range(const std::string& text, std::size_t dim);  // "x2=-1:2"

}  // namespace nsdyn::cli
