#include <iostream>
#include <string>
#include <vector>

#include "gridarb/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return gridarb::cli::cli_main(args, std::cout, std::cerr);
}
