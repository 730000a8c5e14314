#include <iostream>

#include "silhlab/cli_app.hpp"

int main(int argc, char** argv) {
  return silhlab::cli::run(argc, argv, std::cout, std::cerr);
}
