#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace popcent::cli {

enum ExitCode : int { kOk = 0, kUsage = 1, kData = 2, kInternal = 3 };

/// Runs one command line (args exclude the program name).
int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err);

/// "lo..hi:step" or "lo..hi"; thresholds must lie in [0, 100].
std::vector<int> parse_grid(const std::string &spec);

} // namespace popcent::cli
