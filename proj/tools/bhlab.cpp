#include <iostream>
#include <string>
#include <vector>

#include "bhlab/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return bhlab::run_cli(args, std::cout, std::cerr);
}
