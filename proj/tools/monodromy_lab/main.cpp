#include <iostream>

#include "monodromy_lab/cli.hpp"

int main(int argc, char** argv) {
  return monodromy::lab::run(argc, argv, std::cout, std::cerr);
}
