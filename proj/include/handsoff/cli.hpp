#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace handsoff {

/// Exit codes of the `handsoff` command line.
enum ExitCode : int {
  kExitOk = 0,
  kExitConfig = 1,
  kExitInfeasible = 2,
  kExitSolver = 3,
  kExitViolations = 4,
};

/// Runs `handsoff <args...>` (args excludes the program name). Artifacts go
/// to --out; the human summary goes to `out` and diagnostics to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace handsoff
