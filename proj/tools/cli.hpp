#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace tabformula::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitRuntime = 1;
inline constexpr int kExitSchema = 2;

/// Runs one command line. `args` excludes the program name. Results go to
/// `out`, diagnostics and run summaries to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace tabformula::cli
