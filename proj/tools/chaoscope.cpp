#include <iostream>

#include "chaoscope/cli.hpp"

int main(int argc, char** argv) {
  return chaoscope::run_cli(std::vector<std::string>(argv, argv + argc), std::cout, std::cerr);
}
