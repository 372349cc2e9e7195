#include <iostream>

#include "nsdyn/cli/commands.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return nsdyn::cli::run_cli(std::move(args), std::cout, std::cerr);
}
