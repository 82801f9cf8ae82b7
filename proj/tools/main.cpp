#include <iostream>
#include <string>
#include <vector>

#include "tauttwist/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return tauttwist::run_cli(args, std::cout, std::cerr);
}
