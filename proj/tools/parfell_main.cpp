#include <iostream>
#include <string>
#include <vector>

#include "parfell/cli.hpp"

int main(int argc, char** argv) {
  const std::vector<std::string> args(argv + 1, argv + argc);
  const auto r = parfell::cli::run(args);
  std::cout << r.report;
  if (!r.error.empty()) std::cerr << "parfell: " << r.error << "\n";
  return r.exit_code;
}
