#include <iostream>

#include "vmz/cli.hpp"

int main(int argc, char** argv) {
  return vmz::run_command(std::vector<std::string>(argv + 1, argv + argc), std::cout, std::cerr);
}
