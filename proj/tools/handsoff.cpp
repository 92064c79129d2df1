#include <iostream>
#include <string>
#include <vector>

#include "handsoff/cli.hpp"

int main(int argc, char** argv) {
  const std::vector<std::string> args(argv + 1, argv + argc);
  return handsoff::run_cli(args, std::cout, std::cerr);
}
