#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace gmc::cli {

/// Exit codes shared by every subcommand.
enum ExitCode : int { kOk = 0, kFailure = 1, kUsage = 2 };

/// Entry point behind the `gmc` executable. Subcommands: sweep, denoise,
/// eval, threshold. Writes human-readable output to `out` and diagnostics
/// to `err`. args[0] is the program name, as in argv.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace gmc::cli
