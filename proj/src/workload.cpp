#include "ztorch/workload.hpp"

#include <cmath>
#include <istream>
#include <map>
#include <ostream>

#include "ztorch/csv.hpp"

namespace ztorch {

const std::vector<BaselineProfile>& openepc_profiles() {
  // Percentages of one compute node's capacity, divided by 100.
  static const std::vector<BaselineProfile> table = {
      {"MME", DemandClass::low, {0.177, 0.159, 0.058}},
      {"MME", DemandClass::high, {0.029, 0.038, 0.019}},
      {"S-GW", DemandClass::low, {0.007, 0.003, 0.0014}},
      {"S-GW", DemandClass::high, {0.791, 0.033, 0.912}},
      {"HSS", DemandClass::low, {0.009, 0.011, 0.007}},
      {"HSS", DemandClass::high, {0.029, 0.045, 0.013}},
      {"PCRF", DemandClass::low, {0.012, 0.006, 0.005}},
      {"PCRF", DemandClass::high, {0.019, 0.039, 0.009}},
      {"PDN-GW", DemandClass::low, {0.017, 0.021, 0.008}},
      {"PDN-GW", DemandClass::high, {0.531, 0.372, 0.92}},
  };
  return table;
}

std::vector<BaselineProfile> baseline_set(const std::string& name) {
  std::vector<BaselineProfile> out;
  for (const auto& p : openepc_profiles()) {
    if (name == "both" || (name == "high" && p.demand_class == DemandClass::high) ||
        (name == "low" && p.demand_class == DemandClass::low))
      out.push_back(p);
  }
  if (out.empty()) throw ConfigError("unknown baseline set '" + name + "' (high|low|both)");
  return out;
}

void WorkloadConfig::validate() const {
  if (n_baselines < 1) throw ConfigError("workload.n_baselines must be >= 1");
  if (n_vnfs < n_baselines) throw ConfigError("workload.n_vnfs must be >= n_baselines");
  if (!(sigma >= 0.0) || !std::isfinite(sigma)) throw ConfigError("workload.sigma must be >= 0");
  if (!(pareto_shape > 0.0)) throw ConfigError("workload.pareto_shape must be > 0");
  if (horizon < 1) throw ConfigError("workload.horizon must be >= 1");
  if (dims < 1 || dims > kMaxKpis) throw ConfigError("workload.dims out of range");
}

std::vector<KpiVector> draw_vnf_population(const WorkloadConfig& cfg,
                                           std::span<const BaselineProfile> baselines) {
  cfg.validate();
  if (baselines.empty()) throw ConfigError("draw_vnf_population: empty baseline list");
  const std::size_t n_base = std::min<std::size_t>(baselines.size(), cfg.n_baselines);
  for (std::size_t b = 0; b < n_base; ++b)
    if (baselines[b].kpi_means.size() != cfg.dims)
      throw ConfigError("baseline '" + baselines[b].name + "' has the wrong KPI dimension");

  Rng rng(cfg.seed, stream::population);
  std::vector<KpiVector> means;
  means.reserve(static_cast<std::size_t>(cfg.n_vnfs));
  for (int i = 0; i < cfg.n_vnfs; ++i) {
    const auto& scale = baselines[static_cast<std::size_t>(i) % n_base].kpi_means;
    KpiVector m(cfg.dims);
    for (std::size_t z = 0; z < cfg.dims; ++z) {
      // Inverse CDF; 1 - U lies in (0,1] so the power is finite.
      const double u = 1.0 - rng.uniform();
      m[z] = scale[z] * std::pow(u, -1.0 / cfg.pareto_shape);
    }
    means.push_back(m.clamped());
  }
  return means;
}

KpiVector sample_slot(const KpiVector& vnf_mean, double sigma, Rng& rng) {
  if (sigma < 0.0) throw ContractViolation("sample_slot: sigma must be >= 0");
  if (sigma == 0.0) return vnf_mean;
  KpiVector out(vnf_mean.size());
  for (std::size_t z = 0; z < vnf_mean.size(); ++z) out[z] = vnf_mean[z] + sigma * rng.normal();
  return out.clamped();
}

TraceGenerator::TraceGenerator(std::vector<KpiVector> means, double sigma, std::uint64_t seed)
    : means_(std::move(means)), sigma_(sigma) {
  if (sigma < 0.0) throw ContractViolation("TraceGenerator: sigma must be >= 0");
  streams_.reserve(means_.size());
  for (std::size_t i = 0; i < means_.size(); ++i) streams_.emplace_back(seed, stream::vnf_base + i);
}

std::int64_t TraceGenerator::next(std::span<KpiVector> out, Exec exec) {
  if (out.size() != means_.size()) throw ContractViolation("TraceGenerator: output size mismatch");
  const auto n = static_cast<std::ptrdiff_t>(means_.size());
  if (exec == Exec::parallel) {
    ZT_OMP_PARALLEL_FOR_IF(n > 512)
    for (std::ptrdiff_t i = 0; i < n; ++i)
      out[static_cast<std::size_t>(i)] =
          sample_slot(means_[static_cast<std::size_t>(i)], sigma_, streams_[static_cast<std::size_t>(i)]);
  } else {
    for (std::ptrdiff_t i = 0; i < n; ++i)
      out[static_cast<std::size_t>(i)] =
          sample_slot(means_[static_cast<std::size_t>(i)], sigma_, streams_[static_cast<std::size_t>(i)]);
  }
  return slot_++;
}

std::vector<VnfTrace> generate_traces(const WorkloadConfig& cfg, std::int64_t slots) {
  const auto base = baseline_set(cfg.baselines);
  TraceGenerator gen(draw_vnf_population(cfg, base), cfg.sigma, cfg.seed);
  std::vector<VnfTrace> traces;
  for (int i = 0; i < cfg.n_vnfs; ++i) traces.emplace_back(i);
  std::vector<KpiVector> buf(gen.n_vnfs());
  for (std::int64_t t = 0; t < slots; ++t) {
    const auto slot = gen.next(buf);
    for (std::size_t i = 0; i < buf.size(); ++i) traces[i].append(slot, buf[i]);
  }
  return traces;
}

void write_trace_csv(std::ostream& os, std::span<const VnfTrace> traces) {
  std::size_t dims = 0;
  for (const auto& tr : traces)
    if (!tr.empty()) {
      dims = tr.samples().front().kpis.size();
      break;
    }
  os << csv::schema_line(kTraceSchema) << '\n' << "vnf_id,slot";
  for (std::size_t z = 1; z <= dims; ++z) os << ",kpi_" << z;
  os << '\n';
  for (const auto& tr : traces) {
    for (const auto& s : tr.samples()) {
      os << tr.vnf_id() << ',' << s.slot;
      for (double v : s.kpis) os << ',' << csv::format_double(v);
      os << '\n';
    }
  }
}

std::vector<VnfTrace> read_trace_csv(std::istream& is) {
  std::string line;
  std::size_t dims = 0;
  bool header_seen = false;
  std::map<int, VnfTrace> by_id;
  std::size_t line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    const auto text = csv::trim(line);
    if (text.empty() || text.front() == '#') continue;
    const auto cols = csv::split(text);
    if (!header_seen) {
      if (cols.size() < 3 || csv::trim(cols[0]) != "vnf_id" || csv::trim(cols[1]) != "slot")
        throw ConfigError("trace csv: missing 'vnf_id,slot,kpi_*' header");
      dims = cols.size() - 2;
      header_seen = true;
      continue;
    }
    if (cols.size() != dims + 2)
      throw ConfigError("trace csv: wrong column count on line " + std::to_string(line_no));
    try {
      const int id = static_cast<int>(csv::parse_int(cols[0]));
      const auto slot = csv::parse_int(cols[1]);
      KpiVector k(dims);
      for (std::size_t z = 0; z < dims; ++z) k[z] = csv::parse_double(cols[z + 2]);
      auto [it, _] = by_id.try_emplace(id, id);
      it->second.append(slot, k);
    } catch (const std::invalid_argument& e) {
      throw ConfigError("trace csv line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  std::vector<VnfTrace> out;
  out.reserve(by_id.size());
  for (auto& [_, tr] : by_id) out.push_back(std::move(tr));
  return out;
}

}  // namespace ztorch
