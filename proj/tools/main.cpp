#include "infocast/cli/commands.hpp"

#include <iostream>

int main(int argc, char **argv) {
  return infocast::cli::dispatch(argc, argv, std::cout, std::cerr);
}
