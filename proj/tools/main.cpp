#include <iostream>
#include <string>
#include <vector>

#include "tarp/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return tarp::cli::run(args, std::cout, std::cerr);
}
