#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace freelmi::cli {

enum ExitCode : int { kOk = 0, kVerdictFailure = 1, kUsage = 2, kNumerical = 3 };

// Parses args (without the program name), runs one subcommand and writes its JSON report.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

const std::vector<std::string>& subcommand_names();

}  // namespace freelmi::cli
