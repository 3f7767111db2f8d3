#include <iostream>

#include "cli.hpp"

int main(int argc, char** argv) {
  auto parsed = gnm::cli::parse_args(argc, argv, std::cout, std::cerr);
  if (!parsed.spec) return parsed.exit_code;
  return gnm::cli::run(*parsed.spec, std::cout, std::cerr);
}
