#pragma once
// Command-line front end. run_cli takes argv without the program name so that
// tests can drive it in-process.
#include <iosfwd>
#include <string>
#include <vector>

namespace dmoments::cli {

enum ExitCode : int {
  kOk = 0,
  kVerificationFailed = 1,
  kUsage = 2,
  kPrecision = 3,
};

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace dmoments::cli
