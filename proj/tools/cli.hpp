// SPDX-License-Identifier: Apache-2.0
//
// rsmasg command line: simulate | analytic | compare | spatial-stats.
#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace rsmasg::cli {

/// Environment variable naming the default output directory.
inline constexpr const char* kOutDirEnv = "RSMASG_OUT_DIR";

/// "lo:step:hi" (inclusive, values rounded to 12 decimals) or "v1,v2,...".
std::vector<double> parse_grid(std::string_view text);

/// Runs one invocation; returns the process exit status. Errors are reported on
/// `err` as {"error": {...}} JSON (and written to <out>/error.json when possible).
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace rsmasg::cli
