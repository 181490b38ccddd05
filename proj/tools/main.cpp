#include <iostream>

#include "cli.hpp"

int main(int argc, char** argv) {
  return lightstore::cli::cli_main({argv, argv + argc}, std::cout, std::cerr);
}
