#include <iostream>
#include <string>
#include <vector>

#include "at4ea/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return at4ea::run_cli(args, std::cout, std::cerr);
}
