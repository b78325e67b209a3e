#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace bellvol::cli {

inline constexpr const char* kToolName = "bellvol";
inline constexpr const char* kToolVersion = "0.1.0";

enum ExitCode : int { kOk = 0, kRuntimeError = 1, kUsageError = 2 };

/// Runs the command line `args` (args[0] is the program name). Results go to
/// `out`, diagnostics and usage text to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Shortest decimal text that parses back to the same double.
std::string format_shortest(double v);
/// Fixed 17 significant digits, '.' decimal point.
std::string format_g17(double v);

}  // namespace bellvol::cli
