#pragma once

#include <iosfwd>

namespace singulim {

/// Exit codes of the command-line driver.
enum ExitCode : int { kExitOk = 0, kExitFailure = 1, kExitMalformed = 2 };

/// Runs the `singulim` command line. Returns 0 on success, 1 on domain or
/// validation errors, 2 on malformed input.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace singulim
