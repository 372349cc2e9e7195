#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "nsdyn/cli/config.hpp"

namespace nsdyn::cli {

/// Flags shared by the verbs; empty strings fall back to [experiment] keys.
struct CommandOptions {
  std::string range;
  std::size_t n = 0;
  std::string at;
  std::string delta;
  std::string eps;
  std::string x0;
  std::string point;
  std::string lambda;
  std::string y0;
  std::string family;
  std::string orbit_seed;
  double t_end = -1.0;
  double rtol = 1e-8;
  double atol = 1e-10;
  std::uint64_t seed = 42;
};

struct Outputs {
  std::vector<std::pair<std::string, std::string>> files;  // name, contents
  std::string text;  // human-readable report for stdout
  std::size_t pass = 0;
  std::size_t fail = 0;
};

/// Runs one verb against a loaded system. Throws nsdyn::Error on domain
/// failures.
Outputs run_verb(const std::string& verb, const SystemConfig& cfg, const CommandOptions& opt);

/// Verbs that take a system argument.
const std::vector<std::string>& system_verbs();

/// %.17g formatting used for every CSV number.
std::string num(double v);

/// Writes via a temporary file in the same directory and renames it.
void write_atomic(const std::string& path, const std::string& contents);

/// Full command line front end; returns the process exit code
/// (0 success, 1 domain error, 2 usage error).
int run_cli(std::vector<std::string> args, std::ostream& out, std::ostream& err);

}  // namespace nsdyn::cli
