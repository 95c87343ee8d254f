#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace epicurve::cli {

enum ExitCode : int {
    Success = 0,
    UsageError = 1,
    DataError = 2,
    LintWarnings = 3,
};

/// Runs one invocation. `args` excludes the program name. Data goes to `out`
/// (or the --out file), diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace epicurve::cli
