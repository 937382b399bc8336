#include <iostream>

#include "juliart/cli.hpp"

int main(int argc, char** argv) {
  return juliart::run_cli(std::vector<std::string>(argv + 1, argv + argc), std::cout, std::cerr);
}
