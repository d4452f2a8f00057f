#pragma once

#include <string>
#include <vector>

namespace parfell::cli {

enum ExitCode : int { kOk = 0, kDefect = 1, kBadInput = 2 };

struct Result {
  int exit_code = kOk;
  std::string report;  // JSON text, empty when the run failed before producing one
  std::string error;
};

/// Runs one command line (without the program name). Never throws.
Result run(const std::vector<std::string>& args);

}  // namespace parfell::cli
