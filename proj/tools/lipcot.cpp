#include <iostream>
#include <string>
#include <vector>

#include "lipcot/commands.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return lipcot::cli::run(args, std::cout, std::cerr);
}
