#include <iostream>

#include "budding_cli/commands.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return budding::cli::run(args, std::cout, std::cerr);
}
