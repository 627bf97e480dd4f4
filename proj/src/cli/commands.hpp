#pragma once

#include <iosfwd>

namespace kppcut::cli {

/// Exit codes of the command-line tool.
enum ExitCode : int {
    kOk = 0,
    kValidation = 2,
    kNumerical = 3,
    kIo = 4,
};

/// Parses argv and runs one subcommand. Data goes to `out` (or --out), diagnostics to `err`.
/// Nothing is written to the data stream unless the command succeeds.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace kppcut::cli
