#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace fsr::cli {

enum ExitCode : int {
  kSuccess = 0,
  kBandViolation = 1,
  kConfigError = 2,
  kIngestionError = 3,
};

/// Entry point for the `fsr` tool. Data goes to `out`, timing and errors to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace fsr::cli
