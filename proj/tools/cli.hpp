#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace hv::cli {

enum ExitCode : int {
  kOk = 0,
  kFailure = 1,
  kValidation = 2,
  kDegenerate = 3,
  kIo = 4,
};

/// Runs `hubervf` with argv-style arguments (args[0] is the program name).
/// Results go to `out` unless --output names a file; diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace hv::cli
