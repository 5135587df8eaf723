#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace cwlab::cli {

enum ExitCode : int {
  kOk = 0,
  kCheckFailed = 1,
  kParameterError = 2,
  kResourceError = 3,
  kIntegrityError = 4,
};

/// Inclusive integer span: "a..b" or a single "a".
std::vector<int> parse_span(std::string_view text);

/// Runs the codeword-lab command line; `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace cwlab::cli
