#include <iostream>

#include "snowdrift/cli.hpp"

int main(int argc, char** argv) {
  return snowdrift::run_cli(argc, argv, std::cout, std::cerr);
}
