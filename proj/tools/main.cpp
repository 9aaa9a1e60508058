#include <iostream>

#include "grood/cli.hpp"

int main(int argc, char** argv) {
  return grood::cli::run_cli(argc, argv, std::cout, std::cerr);
}
