#include <iostream>
#include <string>
#include <vector>

#include "modtv_cli/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return modtv::cli::run(args, std::cout, std::cerr);
}
