#include <velotopo/cli.hpp>

#include <iostream>

int main(int argc, char** argv) {
  return velotopo::run_cli(argc, argv, std::cout, std::cerr);
}
