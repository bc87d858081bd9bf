#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace rgc::cli {

// Runs the rgc-dim front end. `args` holds the full argument vector,
// program name first. Output goes to `out` (or the --out file, written only
// on success); diagnostics go to `err`. Returns the process exit code.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace rgc::cli
