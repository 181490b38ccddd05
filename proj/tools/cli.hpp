#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace lightstore::cli {

enum ExitCode : int { kOk = 0, kConfigError = 1, kNumericalFailure = 2 };

/// Runs the command line `args` (args[0] is the program name). Results and
/// usage go to `out`, diagnostics to `err`.
int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace lightstore::cli
