#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace topowalk::cli {

inline constexpr int exit_ok = 0;
inline constexpr int exit_failure = 1;  // numerical or invariant failure
inline constexpr int exit_usage = 2;

inline constexpr const char* config_schema = "topowalk-config/1";

/// Entry point of the topowalk command line. Results go to `out`, warnings
/// and errors to `err`. Returns the process exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// Same, with the arguments after the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace topowalk::cli
