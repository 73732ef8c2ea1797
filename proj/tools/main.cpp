#include <iostream>
#include <string>
#include <vector>

#include "homcount/cli.hpp"

int main(int argc, char** argv) {
  const std::vector<std::string> args(argv, argv + argc);
  return homcount::cli::run(args, std::cout, std::cerr);
}
