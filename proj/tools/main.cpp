#include <iostream>
#include <string>
#include <vector>

#include "cavgrover/cli.hpp"

int main(int argc, char** argv) {
  namespace cli = cavgrover::cli;
  const auto parsed = cli::parse_config(std::vector<std::string>(argv + 1, argv + argc));
  if (!parsed.config) {
    (parsed.exit_code == cli::kSuccess ? std::cout : std::cerr) << parsed.message << '\n';
    return parsed.exit_code;
  }
  return cli::run(*parsed.config, std::cout, std::cerr);
}
