#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace rsep::cli {

/// Exit statuses. They depend only on the semantic answer.
inline constexpr int kPositive = 0; // realizable / consistent / verified
inline constexpr int kNegative = 1; // the negative answer, with certificate
inline constexpr int kUsage = 2;    // usage or input error

/// Runs one command line (without the program name), writing the report to
/// `out` and diagnostics to `err`.
///
/// Subcommands: visitation, consistency, design-scalar, design-multi,
/// design-scalar-optimal, verify, enumerate, export-plot.
int run_command(const std::vector<std::string> &args, std::ostream &out, std::ostream &err);

} // namespace rsep::cli
