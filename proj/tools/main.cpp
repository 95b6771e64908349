#include <iostream>
#include <string>
#include <vector>

#include "experiment_commands.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return lhvbell::experiment::run_cli(args, std::cout, std::cerr);
}
