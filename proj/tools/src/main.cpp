#include <iostream>

#include "catmap_cli/cli.hpp"

int main(int argc, char** argv) {
  return catmap::cli::main_entry(argc, argv, std::cout, std::cerr);
}
