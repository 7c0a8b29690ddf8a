#include <iostream>

#include "ptstab/cli.hpp"

int main(int argc, char** argv) {
  return ptstab::run_cli(std::vector<std::string>(argv + 1, argv + argc), std::cout, std::cerr);
}
