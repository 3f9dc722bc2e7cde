#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace atcg::cli {

enum ExitCode : int {
  kOk = 0,
  kUsage = 1,
  kParseError = 2,
  kInvalid = 3,
  kBoundsExceeded = 4,
};

// Entry point shared by the `atcg` binary and the tests. `args` excludes
// the program name. Results go to `out`, diagnostics to `err`; `simulate`
// reads its choices from `in`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err,
        std::istream& in);

}  // namespace atcg::cli
