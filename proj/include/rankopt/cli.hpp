#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace rankopt {

// Exit statuses of run_command.
enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 1,         // unknown subcommand, bad flags, missing arguments
  kExitParse = 2,         // malformed JSON or wrongly typed fields
  kExitInvalidInput = 3,  // model constraint violated
  kExitBudget = 4,        // oracle enumeration budget exceeded
  kExitIo = 5,            // unreadable or unwritable file
  kExitInternal = 70,
};

// Runs one subcommand. `args` excludes the program name. Results go to `out`
// (or to --out), errors go to `err` as a one-line JSON object.
int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace rankopt
