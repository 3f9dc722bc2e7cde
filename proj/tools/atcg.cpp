#include <iostream>
#include <string>
#include <vector>

#include "atcg/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return atcg::cli::run(args, std::cout, std::cerr, std::cin);
}
