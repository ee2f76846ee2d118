#include <iostream>
#include <string>
#include <vector>

#include "contrastgen/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return contrastgen::run_cli(args, std::cout, std::cerr);
}
