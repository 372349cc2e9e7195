#pragma once

#include <string>
#include <vector>

#include "nsdyn/cli/config.hpp"

namespace nsdyn::cli {

struct RegistryEntry {
  std::string name;
  std::string description;
  std::string text;  // config file contents
};

const std::vector<RegistryEntry>& registry();
const RegistryEntry* find_example(const std::string& name);

/// A registry name or a path to a config file.
SystemConfig resolve_system(const std::string& name_or_path);

}  // namespace nsdyn::cli
