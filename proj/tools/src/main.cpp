// SPDX-License-Identifier: Apache-2.0
#include <iostream>

#include "erc/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return erc::cli::run_command(args, std::cout, std::cerr);
}
