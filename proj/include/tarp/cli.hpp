#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace tarp::cli {

enum ExitCode : int { kSuccess = 0, kUsage = 1, kDataError = 2, kNumerical = 3 };

/// Parses `args` (args[0] is the program name) and runs the subcommand.
/// Outputs written before a failure are removed.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace tarp::cli
