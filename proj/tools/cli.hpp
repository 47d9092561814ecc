#pragma once

#include <iosfwd>

namespace qpor {

// Exit codes of the command-line driver.
enum ExitCode
{
   kExitOk = 0,
   kExitFindings = 1,   // assertion violations, deadlocks, or an oracle mismatch
   kExitUsage = 2,      // bad arguments or a program that does not parse
   kExitGuard = 3,      // a step or frame guard, an oracle limit, or an execution error
};

int cli_main (int argc, const char *const *argv, std::istream &in, std::ostream &out,
   std::ostream &err);

} // namespace qpor
