#include <iostream>
#include <string>
#include <vector>

#include "sunlayer/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return sunlayer::cli::run(args, std::cout, std::cerr);
}
