#ifndef ENSAVG_CLI_HPP
#define ENSAVG_CLI_HPP

#include <iosfwd>
#include <string>
#include <vector>

namespace ensavg {

inline constexpr int kExitOk = 0;
inline constexpr int kExitDataError = 1;
inline constexpr int kExitUsage = 2;

// Runs one CLI invocation. `args` excludes the program name. Reports go to
// `out` (or the --output file); one-line diagnostics go to `err`.
int run_command(const std::vector<std::string>& args, std::ostream& out,
                std::ostream& err);

}  // namespace ensavg

#endif  // ENSAVG_CLI_HPP
