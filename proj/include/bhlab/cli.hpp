#pragma once

#include <iosfwd>
#include <span>
#include <string>

namespace bhlab {

/// Exit codes of the bhlab command line.
enum ExitCode : int {
  kExitOk = 0,
  kExitCheckFailed = 1,  ///< a hard (exact-arithmetic) verification step failed
  kExitUsage = 2,        ///< bad flags, unreadable or malformed input
  kExitBudget = 3,       ///< exact psi search ran out of nodes
};

/// Runs one bhlab invocation. `args` excludes the program name.
int run_cli(std::span<const std::string> args, std::ostream& out, std::ostream& err);

}  // namespace bhlab
