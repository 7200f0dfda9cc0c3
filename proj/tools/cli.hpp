#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace zeromode::cli {

enum ExitCode : int {
  kSuccess = 0,
  kVerificationFailed = 1,
  kUsageError = 2,
};

/// Runs the command line `args` (without the program name). Reports go to
/// `out`, diagnostics to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace zeromode::cli
