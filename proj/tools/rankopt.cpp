#include <iostream>
#include <string>
#include <vector>

#include "rankopt/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return rankopt::run_command(args, std::cout, std::cerr);
}
