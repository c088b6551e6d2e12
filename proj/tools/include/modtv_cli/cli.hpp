#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace modtv::cli {

enum ExitCode : int {
  kOk = 0,
  kUsage = 1,       ///< bad or missing flags
  kInput = 2,       ///< unreadable file or parse failure
  kInvalid = 3,     ///< parameter validation failure
  kSolverAbort = 4,
  kOracleFailure = 5,
};

/// Entry point of the `modtv` tool. args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace modtv::cli
