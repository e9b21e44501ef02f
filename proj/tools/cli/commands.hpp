#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace c3rotor::cli {

// Process exit codes; stable for scripting.
enum ExitCode : int {
    kSuccess = 0,
    kUsageError = 1,
    kNumericalFailure = 2,
};

// Runs the command line `args` (args[0] is the program name). Results go to
// `out` unless --output names a file; diagnostics and usage go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace c3rotor::cli
