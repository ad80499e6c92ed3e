#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

namespace miner::cli {

/// Entry point behind the `miner` binary. `args` excludes the program name;
/// `env` supplies GITHUB_TOKEN and friends. Diagnostics go to `err`, primary
/// results to `out` or to files.
///
/// Exit codes: 0 success, 1 usage error, 2 input/format error, 3 partial
/// failure, 4 network/rate-limit error.
int run_cli(const std::vector<std::string>& args, const std::map<std::string, std::string>& env,
            std::ostream& out, std::ostream& err);

} // namespace miner::cli
