#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace acx {

/// One entry of the closed identity registry.
struct RegistryEntry {
  std::string id;
  std::string description;
};

/// All identity ids, in a fixed order.
const std::vector<RegistryEntry>& identity_registry();
bool is_registered(const std::string& id);

struct IdentityCheck {
  std::string id;
  std::string chart = "twisted:2";
  int rank = 2;
  /// Coefficient degree bound for random inputs.
  int degree = 2;
  std::uint64_t seed = 1;
};

/// One named comparison inside a check.
struct ResidualEntry {
  std::string name;
  bool zero = true;
  /// Offending probe, or empty for direct (probe-free) comparisons.
  std::string probe;
  std::size_t terms = 0;
  /// Full residual; empty when zero.
  std::string residual;
};

struct IdentityReport {
  std::string id;
  std::string chart;
  bool pass = false;
  bool skip = false;
  std::string reason;
  std::vector<std::pair<std::string, std::uint64_t>> seeds;
  std::vector<ResidualEntry> residuals;
  double millis = 0.0;

  /// The failing residual with the most terms, or nullptr when all are zero.
  const ResidualEntry* worst() const;
};

/// Runs one check.  Unknown ids throw std::invalid_argument; errors while
/// building operators are reported as failures with the error text.
IdentityReport check_identity(const IdentityCheck& spec);

struct SuiteConfig {
  std::string chart = "twisted:2";
  int rank = 2;
  int degree = 2;
  std::uint64_t seed = 1;
  /// Empty means the whole registry.
  std::vector<std::string> ids;
  bool parallel = false;
};

struct SuiteSummary {
  int pass = 0;
  int fail = 0;
  int skip = 0;
};

struct SuiteResult {
  std::vector<IdentityReport> reports;
  SuiteSummary summary;
};

/// Runs the selected checks.  Reports come back in registry-selection order
/// whether or not they ran in parallel.  Throws std::invalid_argument for an
/// unknown id or chart.
SuiteResult run_suite(const SuiteConfig& config);

}  // namespace acx
