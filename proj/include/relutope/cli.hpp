#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace relutope {

/// Process exit codes of the command-line front end.
enum ExitCode : int {
    exit_ok = 0,
    exit_internal = 1,
    exit_usage = 2,
    exit_input_format = 3,
    exit_infeasible = 4,
    exit_resource_cap = 5,
};

/// Runs one command line (args excludes the program name). Output files are
/// written directly; "-" or an omitted output path means `out`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace relutope
