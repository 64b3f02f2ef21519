#include <iostream>

#include "sovc/runner/commands.hpp"

int main(int argc, char** argv) {
  return sovc::runner::run_cli({argv + 1, argv + argc}, std::cout, std::cerr);
}
