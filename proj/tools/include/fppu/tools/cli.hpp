#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace fppu::tools {

/// Process exit statuses of the fppu tool.
enum ExitCode : int {
  kExitOk = 0,
  kExitVerificationFailed = 1,  ///< also used for unreadable or malformed input files
  kExitUsage = 2,
};

/// Entry point behind main(); argv[0] is the program name.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// Convenience overload taking the arguments without the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace fppu::tools
