#include <iostream>
#include <string>
#include <vector>

#include "gmc/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return gmc::cli::run(args, std::cout, std::cerr);
}
