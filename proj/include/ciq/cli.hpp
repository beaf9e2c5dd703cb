#pragma once
// Command-line surface, callable in-process so tests can drive it without
// spawning a binary.

#include <iosfwd>
#include <string>
#include <vector>

namespace ciq {

// Runs one invocation. args holds the arguments after the program name.
// Results go to `out` as key=value lines; diagnostics go to `err`. Returns
// the process exit status: 0 on success, 1 on a module error, CLI-parser
// codes for usage problems.
int cli_run(std::vector<std::string> args, std::ostream& out, std::ostream& err);

}  // namespace ciq
