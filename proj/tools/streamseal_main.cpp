#include <iostream>

#include <streamseal/cli.hpp>

int main(int argc, char** argv) {
  return streamseal::run_cli(argc, argv, std::cout, std::cerr);
}
