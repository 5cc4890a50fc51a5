#include <iostream>
#include <string>
#include <vector>

#include "tourney/commands.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return tourney::run_cli(args, std::cout, std::cerr);
}
