#pragma once

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "acx/verifier.hpp"

namespace acx::cli {

/// Exit codes of the verifier front end.
enum ExitCode : int { kAllPassed = 0, kIdentityFailed = 1, kUsageError = 2 };

struct RunConfig {
  std::string chart = "twisted:2";
  int rank = 2;
  int degree = 2;
  std::uint64_t seed = 1;
  /// Empty means the whole registry.
  std::vector<std::string> ids;
  /// Report path; empty writes nothing, "-" writes to stdout.
  std::string out;
  bool parallel = false;
};

/// Bad flags, config files or values.  The message names the offending field.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Applies the fields present in a JSON config document on top of `base`.
/// Unknown keys and wrongly typed values throw ConfigError; syntax errors
/// report line and column.
RunConfig merge_config_json(const std::string& text, RunConfig base);
RunConfig load_config_file(const std::string& path, RunConfig base);

/// Range checks: n >= 1, rank >= 1, degree >= 0, known ids.
void validate(const RunConfig& config);

SuiteConfig to_suite_config(const RunConfig& config);

/// The JSON report, pretty printed, with stable key order.
std::string report_json(const RunConfig& config, const SuiteResult& result);

/// Full front end: parse, run, report.  Returns the process exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace acx::cli
