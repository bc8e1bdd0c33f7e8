#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ztorch/affinity.hpp"
#include "ztorch/domain.hpp"
#include "ztorch/epoch_control.hpp"
#include "ztorch/parallel.hpp"
#include "ztorch/placement.hpp"
#include "ztorch/workload.hpp"

namespace ztorch {

enum class Policy { ztorch, instant, optimum };

/// When z-TORCH recomputes the VNF placement at a decisional point.
enum class PlacementTrigger {
  every_decision,    // every decision, even with an unchanged model
  any_rebind,        // whenever the affinity model was rebuilt
  deviation_rebind,  // only when a deviation-driven rebind happened
};

const char* to_string(PlacementTrigger p) noexcept;
PlacementTrigger parse_placement_trigger(const std::string& name);

const char* to_string(Policy p) noexcept;
Policy parse_policy(const std::string& name);

struct ScenarioConfig {
  WorkloadConfig workload;
  KpiVector node_capacity{1.0, 1.0, 1.0};
  int n_nodes = 0;               // 0: auto-size from the population
  double node_headroom = 2.0;    // auto-size target: capacity / expected demand
  double capacity_scale = 1.0;   // planning capacity = scale * node_capacity
  QLearningConfig qlearning;
  std::vector<std::int64_t> intervals = default_monitoring_intervals();
  std::int64_t initial_omega = 500;
  int initial_interval_index = kDefaultIntervalIndex;
  int default_interval_index = kDefaultIntervalIndex;
  int initial_n_groups = 2;
  int max_n_groups = 0;          // 0: min(I, 16)
  int rebind_strikes = 2;        // consecutive deviation epochs before a rebind
  bool grow_rebind = true;       // rebuild the model when the group count grows in a quiet epoch
  PlacementTrigger placement_trigger = PlacementTrigger::deviation_rebind;
  bool bounded_optimum = true;   // allow the lower-bound optimum above the exact guard
  Policy policy = Policy::ztorch;
  Exec exec = Exec::parallel;    // data-parallel kernels inside one run

  std::int64_t horizon() const noexcept { return workload.horizon; }
  std::uint64_t seed() const noexcept { return workload.seed; }
  int effective_max_groups() const noexcept;
  void validate() const;
};

struct EpochRecord {
  std::int64_t tau = 0;
  std::int64_t start_slot = 0;
  std::int64_t omega = 0;        // elapsed slots
  int interval_index = 0;        // in effect during the epoch
  int n_groups = 0;              // in effect during the epoch
  std::int64_t deviations = 0;   // distinct VNFs seen off-group at sample points
  std::int64_t migrations = 0;   // decision moves plus reactive moves
  std::int64_t messages = 0;
  bool rebind = false;
};

enum class OptimumKind { none, exact, bounded };

struct RunMetrics {
  Policy policy = Policy::ztorch;
  std::uint64_t seed = 0;
  double sigma = 0.0;
  int i_count = 0;
  int n_nodes = 0;
  std::int64_t horizon = 0;
  std::vector<EpochRecord> epochs;

  std::int64_t migrations_total = 0;
  std::int64_t messages_total = 0;
  std::int64_t reactive_migrations = 0;
  std::int64_t capacity_checks = 0;       // node-slot checks against true KPIs
  std::int64_t overload_events = 0;       // node-slots repaired by reactive moves
  std::int64_t unresolved_violations = 0; // node-slots still over capacity after repair
  OptimumKind optimum_kind = OptimumKind::none;

  double mean_omega() const;
  double mean_interval_index() const;
  double mean_n_groups() const;
};

/// Node capacities the scenario runs with (auto-sized when n_nodes is 0).
std::vector<KpiVector> scenario_capacities(const ScenarioConfig& cfg, std::span<const KpiVector> vnf_means);

/// Blind placement at t = 0 from the first sample only. Every policy starts here.
struct BlindStart {
  AffinityModel model;
  std::vector<double> variances;
  PlacementMap placement;
};
BlindStart blind_start(std::span<const KpiVector> first_sample, int n_groups,
                       std::span<const KpiVector> planning_capacities, Exec exec = Exec::parallel);

/// Dispatches on cfg.policy.
RunMetrics run_policy(const ScenarioConfig& cfg);

/// z-TORCH closed loop.
RunMetrics run(const ScenarioConfig& cfg);

/// Fixed omega, finest interval, fixed N, fresh binding on the latest sample.
RunMetrics run_instant_placement(const ScenarioConfig& cfg);

/// Clairvoyant minimum migrations from the shared blind start.
RunMetrics run_optimum(const ScenarioConfig& cfg);

inline constexpr int kExactOptimumMaxVnfs = 12;
inline constexpr int kExactOptimumMaxNodes = 3;

/// Exact minimum of sum_t |{i : P_t(i) != P_{t-1}(i)}| over placement sequences
/// feasible at every slot, starting from `start`. slots[t][i] is VNF i at slot t.
std::int64_t optimum_migrations_exact(std::span<const std::vector<KpiVector>> slots, std::span<const int> start,
                                      std::span<const KpiVector> capacities);

/// Streaming lower bound on the same quantity: per node, the largest count of
/// biggest initial residents that must leave to fit any single slot and KPI.
class OptimumLowerBound {
 public:
  OptimumLowerBound(std::vector<int> start, std::vector<KpiVector> capacities);
  void observe(std::span<const KpiVector> kpis);
  std::int64_t value() const;

 private:
  std::vector<int> start_;
  std::vector<KpiVector> capacities_;
  std::vector<std::vector<int>> residents_;
  std::vector<std::int64_t> need_;
  std::vector<double> scratch_;
};

/// optimum / solution, 0/0 = 1, capped at 1.
double qod(std::int64_t solution_migrations, std::int64_t optimum_migrations);

double normalized_monitoring_load(std::int64_t ztorch_messages, std::int64_t instant_messages);

inline constexpr const char* kResultsSchema = "ztorch.results/1";
inline constexpr const char* kSummarySchema = "ztorch.summary/1";

void write_results_header(std::ostream& os);
void write_results_rows(std::ostream& os, const std::string& run_id, const RunMetrics& m);

/// Summary of one run. qod and load are empty when the reference is missing.
struct RunSummary {
  std::string run_id;
  RunMetrics metrics;
  std::optional<std::int64_t> optimum_migrations;
  OptimumKind optimum_kind = OptimumKind::none;
  std::optional<double> qod;
  std::optional<double> monitoring_load;
};

void write_summary_header(std::ostream& os);
void write_summary_row(std::ostream& os, const RunSummary& s);

}  // namespace ztorch
