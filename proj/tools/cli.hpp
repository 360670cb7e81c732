#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace qaf::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 1,
  kExitData = 2,
  kExitVerify = 3,
  kExitInstability = 4,
};

/// Run the command line `args` (without the program name). Normal output goes
/// to `out`, diagnostics to `err`; the return value is the process exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace qaf::cli
