#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace owm::cli {

/// Exit codes shared by every subcommand.
enum ExitCode : int {
    kExitOk = 0,
    kExitFailure = 1,  ///< validation failure, analysis or I/O error
    kExitUsage = 2,    ///< bad flags, invalid parameters, malformed input files
};

/// Entry point of the `owm` tool. Reports go to `out`, diagnostics to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// Convenience overload; args[0] is the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace owm::cli
