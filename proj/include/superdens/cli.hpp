#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace superdens {

enum ExitCode : int { kExitOk = 0, kExitUsage = 1, kExitData = 2, kExitSolver = 3 };

/// Entry point of the `superdens` tool. args excludes the program name.
/// Results go to files or `out`, diagnostics to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace superdens
