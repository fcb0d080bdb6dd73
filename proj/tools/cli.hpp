#ifndef DYNDIV_TOOLS_CLI_HPP
#define DYNDIV_TOOLS_CLI_HPP

#include <iosfwd>
#include <string>
#include <vector>

namespace dyndiv::cli {

namespace exit_code {
inline constexpr int kOk = 0;
inline constexpr int kUsage = 1;
inline constexpr int kData = 2;
inline constexpr int kInvariant = 3;
}  // namespace exit_code

/// Runs the `dyndiv` command line. `args` excludes the program name.
/// Output that is not redirected by --output goes to `out`; diagnostics
/// go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace dyndiv::cli

#endif  // DYNDIV_TOOLS_CLI_HPP
