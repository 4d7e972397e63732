#include <iostream>

#include "sieu/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return sieu::run_cli(args, std::cout, std::cerr);
}
