#include <iostream>
#include <string>
#include <vector>

#include "strideskip/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return strideskip::run(args, std::cout, std::cerr);
}
