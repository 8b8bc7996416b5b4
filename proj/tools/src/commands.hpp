#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace warp::cli {

/// Entry point behind the `warp` executable. `args` excludes the program name.
/// Returns the process exit status; diagnostics go to `err`, summaries to `out`.
int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace warp::cli
