#include <iostream>

#include "zoomcast/cli.hpp"

int main(int argc, char** argv) {
  return zoomcast::run_cli(argc, argv, std::cout, std::cerr);
}
