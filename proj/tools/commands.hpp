#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace trifree::cli {

// exit codes
constexpr int kOk = 0;
constexpr int kError = 1;
constexpr int kUsage = 2;
constexpr int kRegime = 3;
constexpr int kSuiteFailure = 4;

// args excludes the program name
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace trifree::cli
