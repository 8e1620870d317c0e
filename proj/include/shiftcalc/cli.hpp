#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace shiftcalc::cli {

// Runs one subcommand. Returns the process exit code:
//   0 success / property holds
//   1 property violated
//   2 input or schema error
//   3 guard tripped (TooLarge / GuardTripped / BoundExhausted)
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace shiftcalc::cli
