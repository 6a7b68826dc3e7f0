#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace cfsmkit::cli {

enum ExitCode : int {
  kOk = 0,
  kIncompatible = 1,
  kParseError = 2,
  kInvalidInput = 3,
  kViolation = 4,
  kInconclusive = 5,
};

/// Runs the tool on `args` (program name excluded) and returns its exit code.
int run(std::vector<std::string> args, std::ostream& out, std::ostream& err);

}  // namespace cfsmkit::cli
