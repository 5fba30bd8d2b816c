#ifndef LEXMATCH_TOOLS_CLI_HPP_
#define LEXMATCH_TOOLS_CLI_HPP_

#include <ostream>
#include <string>
#include <vector>

namespace lexmatch::cli {

enum ExitCode : int { kOk = 0, kNegative = 1, kUsage = 2 };

// Runs one command line (without the program name). Returns the exit code.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace lexmatch::cli

#endif  // LEXMATCH_TOOLS_CLI_HPP_
