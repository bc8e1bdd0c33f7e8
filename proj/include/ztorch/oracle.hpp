#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ztorch/domain.hpp"

namespace ztorch {

struct OracleSuiteResult {
  std::string name;
  int instances = 0;
  int min_instances = 0;
  int failures = 0;
  std::string detail;
  int quality_hits = 0;  // affinity: instances within 10% of the optimum
  double seconds = 0.0;  // wall clock; reported on the console, never in the CSV

  bool passed() const noexcept { return failures == 0 && instances >= min_instances; }
};

struct OracleReport {
  std::vector<OracleSuiteResult> suites;
  bool passed() const noexcept;
};

struct OracleOptions {
  std::uint64_t seed = 20170601;
  int affinity_instances = 100;
  int placement_instances = 200;
  int optimum_random_instances = 60;
};

/// ekm against brute force on uniform random points: the objective is never
/// below the optimum and every model is valid. Also counts instances within
/// 10% of the optimum (quality_hits) without failing on them.
OracleSuiteResult affinity_oracle(const OracleOptions& opt = {});

/// Branch-and-bound against plain enumeration, same assignment and objective.
OracleSuiteResult placement_oracle(const OracleOptions& opt = {});

/// Exact optimum DP against hand-built traces and a sequence enumerator.
OracleSuiteResult optimum_oracle(const OracleOptions& opt = {});

OracleReport run_oracle_suite(const OracleOptions& opt = {});

/// Minimum migrations by enumerating every per-slot placement sequence. Tiny
/// instances only; nullopt when no feasible sequence exists.
std::optional<std::int64_t> optimum_by_enumeration(std::span<const std::vector<KpiVector>> slots,
                                                   std::span<const int> start,
                                                   std::span<const KpiVector> capacities);

inline constexpr const char* kOracleSchema = "ztorch.oracle/1";
void write_oracle_report(std::ostream& os, const OracleReport& r);

}  // namespace ztorch
