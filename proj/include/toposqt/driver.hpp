#pragma once

#include <string>
#include <vector>

namespace toposqt {

struct CommandResult {
  int exit_code = 0;
  std::string out;
  std::string err;
};

// Runs one CLI invocation (argv without the program name). Exit codes:
// 0 success, 1 domain error (structured JSON on err), 2 usage.
CommandResult run_command(const std::vector<std::string>& args);

}  // namespace toposqt
