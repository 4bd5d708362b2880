#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace lipext::cli {

inline constexpr int exit_ok = 0;
inline constexpr int exit_failed = 1;      // suite: some criterion failed
inline constexpr int exit_validation = 2;  // bad flags, files or input data
inline constexpr int exit_numerical = 3;   // a result could not be certified

/// Runs one `lipext` invocation (args exclude the program name). Results go
/// to `out` or to the --output file; one-line error messages go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace lipext::cli
