#ifndef HCR_TOOLS_CLI_HPP
#define HCR_TOOLS_CLI_HPP

#include <iosfwd>
#include <string>
#include <vector>

namespace hcr::cli {

/// Entry point shared by the hcr binary and the CLI tests. Returns the
/// process exit code; report text goes to out, diagnostics to err.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace hcr::cli

#endif  // HCR_TOOLS_CLI_HPP
