#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace qenergy::cli {

enum ExitCode : int { ok = 0, usage_error = 1, check_failed = 2 };

// Runs the command line in-process. Reports go to `out` unless --output names a file;
// diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

int run(int argc, char** argv);

}  // namespace qenergy::cli
