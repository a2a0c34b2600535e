#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace ssmrpe::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitData = 2;
inline constexpr int kExitNumerical = 3;

/// Runs one `ssmrpe` invocation. args[0] is the program name. Diagnostics go
/// to `err`; `out` receives short summaries.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace ssmrpe::cli
