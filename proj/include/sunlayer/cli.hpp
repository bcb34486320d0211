#ifndef SUNLAYER_CLI_HPP_
#define SUNLAYER_CLI_HPP_

#include <iosfwd>
#include <string>
#include <vector>

namespace sunlayer::cli {

enum ExitCode : int { kSuccess = 0, kNumericalFailure = 1, kUsageError = 2 };

/// Run one command. `args` excludes the program name. Rows go to the
/// --out file (or `out` when --out is "-"); diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Format a double with 9 significant digits, locale independent.
std::string format_number(double value);

}  // namespace sunlayer::cli

#endif  // SUNLAYER_CLI_HPP_
