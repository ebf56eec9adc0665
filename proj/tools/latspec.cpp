#include <iostream>

#include "latspec/cli.hpp"

int main(int argc, char** argv) {
  return latspec::run_command_line(argc, argv, std::cout, std::cerr);
}
