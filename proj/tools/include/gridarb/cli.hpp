#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace gridarb::cli {

/// Exit codes of the command line tool.
enum Exit : int { kOk = 0, kUsage = 1, kDataError = 2, kModelFault = 3 };

/// Runs `gridarb <subcommand> [options]`; `args` excludes the program name.
int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace gridarb::cli
