#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "ztorch/domain.hpp"
#include "ztorch/parallel.hpp"
#include "ztorch/rng.hpp"

namespace ztorch {

enum class DemandClass { low, high };

/// Measured mean utilization of one vEPC function under one user profile.
/// KPI order everywhere in the library: CPU, memory/storage, network.
struct BaselineProfile {
  std::string name;
  DemandClass demand_class = DemandClass::high;
  KpiVector kpi_means;
};

/// The ten measured OpenEPC profiles (five functions x low/high), normalized.
const std::vector<BaselineProfile>& openepc_profiles();

/// Named selection of baselines: "high", "low" (five each) or "both" (all ten).
std::vector<BaselineProfile> baseline_set(const std::string& name);

struct WorkloadConfig {
  int n_vnfs = 1000;
  int n_baselines = 5;
  double sigma = 0.1;          // per-slot standard deviation, normalized units
  double pareto_shape = 3.0;
  std::int64_t horizon = 10'000'000;
  std::uint64_t seed = 1;
  std::string baselines = "high";
  std::size_t dims = kDefaultKpis;

  void validate() const;
};

/// Mean profile for every VNF: baseline assigned round-robin, then each KPI drawn
/// from Pareto(scale = baseline mean, shape) and capped to [0,1].
std::vector<KpiVector> draw_vnf_population(const WorkloadConfig& cfg,
                                           std::span<const BaselineProfile> baselines);

/// One slot of one VNF: per-KPI Normal(mean, sigma) clamped to [0,1].
KpiVector sample_slot(const KpiVector& vnf_mean, double sigma, Rng& rng);

/// Per-slot KPI source for a whole population. Each VNF owns an independent
/// stream, so the serial and OpenMP kernels produce bit-identical slots.
class TraceGenerator {
 public:
  TraceGenerator(std::vector<KpiVector> means, double sigma, std::uint64_t seed);

  std::size_t n_vnfs() const noexcept { return means_.size(); }
  std::size_t dims() const noexcept { return means_.empty() ? 0 : means_.front().size(); }
  double sigma() const noexcept { return sigma_; }
  const std::vector<KpiVector>& means() const noexcept { return means_; }

  /// Slot index the next call to next() produces.
  std::int64_t next_slot() const noexcept { return slot_; }

  /// Fills out[i] with VNF i's KPIs for the next slot and returns that slot.
  std::int64_t next(std::span<KpiVector> out, Exec exec = Exec::parallel);

 private:
  std::vector<KpiVector> means_;
  std::vector<Rng> streams_;
  double sigma_;
  std::int64_t slot_ = 0;
};

/// Convenience: materialize the first `slots` slots as per-VNF traces.
std::vector<VnfTrace> generate_traces(const WorkloadConfig& cfg, std::int64_t slots);

/// Trace CSV: schema line, then `vnf_id,slot,kpi_1..kpi_Z`, shortest round-trip
/// decimal so a reload is bit-exact.
void write_trace_csv(std::ostream& os, std::span<const VnfTrace> traces);
std::vector<VnfTrace> read_trace_csv(std::istream& is);

inline constexpr const char* kTraceSchema = "ztorch.trace/1";

}  // namespace ztorch
