#include <iostream>
#include <string>
#include <vector>

#include "alloc_counter.hpp"
#include "cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  cospectral::cli::Hooks hooks;
  hooks.allocated_bytes = cospectral::tools::allocated_bytes;
  return cospectral::cli::run(args, std::cout, std::cerr, hooks);
}
