#include <iostream>

#include "bclust/cli.hpp"

int main(int argc, char** argv) {
  return bclust::cli::main_entry(argc, argv, std::cout, std::cerr);
}
