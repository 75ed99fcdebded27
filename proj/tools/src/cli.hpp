#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace ogclab::cli {

enum ExitCode { kPass = 0, kMathFailure = 1, kUsage = 2, kResourceCap = 3 };

/// Runs the ogclab front-end on the command-line arguments, program name
/// excluded. Reports go to `out`, diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace ogclab::cli
