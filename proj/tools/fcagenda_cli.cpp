#include <iostream>
#include <string>
#include <vector>

#include "fcagenda/commands.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return fcagenda::cli::run(args, std::cout, std::cerr);
}
