#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace pdo::cli {

enum ExitCode : int {
  kOk = 0,
  kConfigError = 2,
  kNumericalFailure = 3,
  kHypothesisViolation = 4,
};

// Runs one command line (without the program name). The JSON report goes to out,
// diagnostics and warnings to err.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace pdo::cli
