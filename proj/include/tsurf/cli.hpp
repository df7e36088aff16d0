#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace tsurf::cli {

/// Exit codes shared by every subcommand.
enum ExitCode : int {
  kOk = 0,
  kUsage = 1,
  kDataError = 2,
  kInternal = 3,
};

/// Runs `trail-surface <args...>` (args excludes the program name). Data goes
/// to `out`; errors go to `err` as one JSON object per line.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

int main(int argc, char** argv);

}  // namespace tsurf::cli
