#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace pbphase::cli {

enum ExitCode : int {
  kOk = 0,
  kValidation = 1,
  kNumerical = 2,
  kIo = 3,
};

/// Runs one subcommand; `args` excludes the program name. Output files named
/// by --out are written atomically; "--out -" (the default) writes to `out`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace pbphase::cli
