#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace juliart {

enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 1,
  kExitIo = 2,
  kExitScene = 3,       // lexical, syntax or semantic error in the scene text
  kExitEvaluation = 4,  // evaluation, limit or render failure
  kExitVerification = 5,
};

/// Command-line entry point; `args` excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace juliart
