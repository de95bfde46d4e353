#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace nestlab {

// Runs one command line (program name excluded) against the given streams
// and returns the process exit code. Never throws; failures map to codes
// through exit_code().
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace nestlab
