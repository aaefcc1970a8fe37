#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace gog::cli {

enum ExitCode : int { kOk = 0, kUsage = 1, kData = 2, kProperty = 3 };

/// Runs the `gog` command line. `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace gog::cli
