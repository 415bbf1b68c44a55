#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace rhga {

/// Entry point of the `rhga` tool. args excludes the program name.
/// Returns 0 on success, 2 on usage or configuration errors, 1 on other failures.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace rhga
