#include <iostream>
#include <string>
#include <vector>

#include "lat2d/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return lat2d::run_cli(args, std::cout, std::cerr);
}
