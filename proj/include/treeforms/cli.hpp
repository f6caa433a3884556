#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace treeforms {

enum ExitCode : int { exit_pass = 0, exit_input = 1, exit_resource = 2, exit_verification = 3 };

/// Runs the command line `args` (without the program name). Reports go to
/// `out`, diagnostics to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Comma separated integers. "a,...,b" repeats a up to `length` entries when
/// `length` is nonzero.
std::vector<long long> parse_int_list(const std::string& text, const std::string& flag, std::size_t length = 0);

}  // namespace treeforms
