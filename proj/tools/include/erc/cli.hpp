// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace erc::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitData = 2;
inline constexpr int kExitNumeric = 3;

/// Runs one erc-lab invocation. `args` excludes the program name. Returns the
/// process exit code: 0 success, 1 usage, 2 data error, 3 numeric failure.
int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

struct SelftestLine {
  std::string name;
  bool passed = false;
  std::string detail;
};

/// Fixed statistics fixtures with known answers.
std::vector<SelftestLine> stats_selftest();

}  // namespace erc::cli
