#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace bitret {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUnsolved = 1;
inline constexpr int kExitInvalid = 2;

// Runs one CLI invocation; args excludes the program name. Returns 0 on
// success, 1 when a solver stops unsolved within its budget and 2 on invalid
// input.
int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run_command(int argc, const char* const* argv);

}  // namespace bitret
