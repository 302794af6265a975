#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace postlr::cli {

enum ExitCode : int { kOk = 0, kSuiteFailed = 1, kUsage = 2 };

// Runs one command line (without the program name). Results go to out, diagnostics to err.
// A "--config <path>" file of key=value lines supplies defaults for the leaf subcommand's
// options; flags given on the command line take precedence.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace postlr::cli
