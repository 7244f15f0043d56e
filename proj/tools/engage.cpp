// SPDX-License-Identifier: Apache-2.0
#include <iostream>

#include "engage/cli/cli.hpp"

int main(int argc, char** argv) {
  return engage::cli::run(argc, argv, std::cout, std::cerr);
}
