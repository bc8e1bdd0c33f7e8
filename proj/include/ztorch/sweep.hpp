#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "ztorch/engine.hpp"

namespace ztorch {

/// Runs `policy` plus whatever references its summary needs (the optimum for
/// qod, Instant Placement for the monitoring load). Reference failures leave
/// the matching field empty; a failure of `policy` itself propagates.
RunSummary summarize(const ScenarioConfig& cfg, Policy policy, const std::string& run_id);

/// All three policies for one configuration, sharing the references.
std::vector<RunSummary> summarize_all(const ScenarioConfig& cfg, const std::string& run_id);

struct SweepSpec {
  std::string parameter = "sigma";  // sigma | i_count
  std::vector<double> values;
  int seeds = 5;
  std::uint64_t first_seed = 1;
  std::filesystem::path base_config;  // empty: built-in defaults
  std::filesystem::path out;          // empty: caller decides

  void validate() const;
  /// Base config with the swept parameter set to `value` and the given seed.
  ScenarioConfig apply(const ScenarioConfig& base, double value, std::uint64_t seed) const;
};

/// [sweep] section with parameter, values, seeds, first_seed, base_config, out.
/// Relative base_config paths resolve against `base_dir`.
SweepSpec parse_sweep_spec(std::istream& is, const std::string& source = "<stream>",
                           const std::filesystem::path& base_dir = {});
SweepSpec load_sweep_spec(const std::filesystem::path& path);

struct SweepCell {
  Policy policy = Policy::ztorch;
  std::size_t value_index = 0;
  double value = 0.0;
  std::uint64_t seed = 0;
  bool ok = false;
  std::string error;
  RunSummary summary;
};

/// Across-seed aggregate for one (policy, value). `ci` fields are 95%
/// Student-t half-widths; NaN when fewer than two samples exist.
struct SweepAggregate {
  Policy policy = Policy::ztorch;
  double value = 0.0;
  int runs = 0;
  int failed = 0;
  int qod_n = 0;
  double qod_mean = 0.0, qod_ci = 0.0;
  int load_n = 0;
  double load_mean = 0.0, load_ci = 0.0;
  double migrations_mean = 0.0;
  double mean_omega = 0.0;
  double mean_n_groups = 0.0;
  double mean_interval_index = 0.0;
};

struct SweepResult {
  std::vector<SweepCell> cells;  // ordered by (policy, value, seed)
  std::vector<SweepAggregate> aggregates;
  std::size_t failed_cells() const;
};

/// Fans (value, seed) pairs out over `jobs` worker threads; each run itself is
/// single-threaded. Output order does not depend on completion order.
SweepResult run_sweep(const SweepSpec& spec, const ScenarioConfig& base, int jobs = 1);

/// Mean and 95% t half-width.
std::pair<double, double> mean_ci95(const std::vector<double>& xs);

inline constexpr const char* kSweepCellsSchema = "ztorch.sweep_cells/1";
inline constexpr const char* kSweepSchema = "ztorch.sweep/1";

void write_sweep_cells(std::ostream& os, const SweepSpec& spec, const SweepResult& r);
void write_sweep_aggregates(std::ostream& os, const SweepSpec& spec, const SweepResult& r);

}  // namespace ztorch
