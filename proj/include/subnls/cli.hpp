#pragma once

#include <iosfwd>

namespace subnls {

/// Exit codes of the command-line tool.
enum ExitCode : int { kExitOk = 0, kExitUsage = 1, kExitNotConverged = 2, kExitAssumption = 3 };

/// Runs the `subnls` command line; output goes to `out`, diagnostics to `err`.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace subnls
