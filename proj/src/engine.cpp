#include "ztorch/engine.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <ostream>

#include "ztorch/csv.hpp"

namespace ztorch {

const char* to_string(Policy p) noexcept {
  switch (p) {
    case Policy::ztorch: return "ztorch";
    case Policy::instant: return "instant";
    case Policy::optimum: return "optimum";
  }
  return "?";
}

Policy parse_policy(const std::string& name) {
  if (name == "ztorch") return Policy::ztorch;
  if (name == "instant") return Policy::instant;
  if (name == "optimum") return Policy::optimum;
  throw ConfigError("unknown policy '" + name + "' (ztorch|instant|optimum)");
}

const char* to_string(PlacementTrigger p) noexcept {
  switch (p) {
    case PlacementTrigger::every_decision: return "every_decision";
    case PlacementTrigger::any_rebind: return "any_rebind";
    case PlacementTrigger::deviation_rebind: return "deviation_rebind";
  }
  return "?";
}

PlacementTrigger parse_placement_trigger(const std::string& name) {
  if (name == "every_decision") return PlacementTrigger::every_decision;
  if (name == "any_rebind") return PlacementTrigger::any_rebind;
  if (name == "deviation_rebind") return PlacementTrigger::deviation_rebind;
  throw ConfigError("unknown placement trigger '" + name + "' (every_decision|any_rebind|deviation_rebind)");
}

int ScenarioConfig::effective_max_groups() const noexcept {
  const int cap = max_n_groups > 0 ? max_n_groups : static_cast<int>(kGroupSolverMaxGroups);
  return std::min(cap, workload.n_vnfs);
}

void ScenarioConfig::validate() const {
  workload.validate();
  if (node_capacity.size() != workload.dims) throw ConfigError("nodes.capacity must have one entry per KPI");
  for (double c : node_capacity)
    if (!(c > 0.0)) throw ConfigError("nodes.capacity entries must be > 0");
  if (n_nodes < 0) throw ConfigError("nodes.count must be >= 0");
  if (!(node_headroom > 0.0)) throw ConfigError("nodes.headroom must be > 0");
  if (!(capacity_scale > 0.0)) throw ConfigError("nodes.capacity_scale must be > 0");
  if (intervals.empty()) throw ConfigError("monitoring.intervals must not be empty");
  for (std::size_t k = 0; k < intervals.size(); ++k)
    if (intervals[k] < 1 || (k > 0 && intervals[k] <= intervals[k - 1]))
      throw ConfigError("monitoring.intervals must be positive and increasing");
  const int n_int = static_cast<int>(intervals.size());
  if (initial_interval_index < 1 || initial_interval_index > n_int)
    throw ConfigError("monitoring.initial_index out of range");
  if (default_interval_index < 1 || default_interval_index > n_int)
    throw ConfigError("monitoring.default_index out of range");
  qlearning.validate(intervals.front());
  if (initial_omega < qlearning.omega_min || initial_omega > qlearning.omega_max)
    throw ConfigError("epoch.initial_omega must lie within [omega_min, omega_max]");
  if (horizon() < initial_omega) throw ConfigError("workload.horizon must be >= epoch.initial_omega");
  if (max_n_groups < 0 || (max_n_groups > 0 && max_n_groups < 2))
    throw ConfigError("affinity.max_groups must be 0 (auto) or >= 2");
  if (max_n_groups > static_cast<int>(kGroupSolverMaxGroups))
    throw ConfigError("affinity.max_groups exceeds the exact solver guard");
  if (initial_n_groups < 2 || initial_n_groups > effective_max_groups())
    throw ConfigError("affinity.initial_groups must be in [2, max_groups]");
  if (rebind_strikes < 1) throw ConfigError("affinity.rebind_strikes must be >= 1");
}

namespace {

double mean_of(const std::vector<EpochRecord>& epochs, auto field) {
  if (epochs.empty()) return 0.0;
  double s = 0.0;
  for (const auto& e : epochs) s += static_cast<double>(field(e));
  return s / static_cast<double>(epochs.size());
}

}  // namespace

double RunMetrics::mean_omega() const {
  return mean_of(epochs, [](const EpochRecord& e) { return e.omega; });
}
double RunMetrics::mean_interval_index() const {
  return mean_of(epochs, [](const EpochRecord& e) { return e.interval_index; });
}
double RunMetrics::mean_n_groups() const {
  return mean_of(epochs, [](const EpochRecord& e) { return e.n_groups; });
}

std::vector<KpiVector> scenario_capacities(const ScenarioConfig& cfg, std::span<const KpiVector> vnf_means) {
  const int n = cfg.n_nodes > 0 ? cfg.n_nodes : auto_size_nodes(vnf_means, cfg.node_capacity, cfg.node_headroom);
  return std::vector<KpiVector>(static_cast<std::size_t>(n), cfg.node_capacity);
}

namespace {

std::vector<ProfilePoint> as_points(std::span<const KpiVector> kpis) {
  std::vector<ProfilePoint> pts(kpis.size());
  for (std::size_t i = 0; i < kpis.size(); ++i) pts[i] = {static_cast<int>(i), kpis[i]};
  return pts;
}

AffinityModel bind_groups(std::span<const KpiVector> kpis, int n_groups, Exec exec) {
  const auto pts = as_points(kpis);
  EkmOptions opt;
  opt.exec = exec;
  return ekm(pts, n_groups, GridSchedule::for_points(kpis.size(), kpis.front().size()), opt).model;
}

PlacementMap place(const AffinityModel& model, std::span<const double> v, std::span<const KpiVector> latest,
                   std::span<const KpiVector> planning) {
  const auto groups = solve_group_placement({model.centers, {planning.begin(), planning.end()}});
  return aavs_place(model, v, groups.group_to_node, latest, planning);
}

}  // namespace

BlindStart blind_start(std::span<const KpiVector> first_sample, int n_groups,
                       std::span<const KpiVector> planning_capacities, Exec exec) {
  BlindStart b;
  b.model = bind_groups(first_sample, n_groups, exec);
  b.variances.resize(first_sample.size());
  for (std::size_t i = 0; i < first_sample.size(); ++i)
    b.variances[i] = euclidean_distance(first_sample[i], b.model.centers[static_cast<std::size_t>(b.model.group_of[i])]);
  b.placement = place(b.model, b.variances, first_sample, planning_capacities);
  return b;
}

namespace {

struct Setup {
  std::vector<KpiVector> means;
  std::vector<KpiVector> physical;
  std::vector<KpiVector> planning;
};

Setup make_setup(const ScenarioConfig& cfg) {
  cfg.validate();
  Setup s;
  s.means = draw_vnf_population(cfg.workload, baseline_set(cfg.workload.baselines));
  s.physical = scenario_capacities(cfg, s.means);
  s.planning = s.physical;
  for (auto& p : s.planning) p *= cfg.capacity_scale;
  return s;
}

RunMetrics blank_metrics(const ScenarioConfig& cfg, Policy policy, const Setup& s) {
  RunMetrics m;
  m.policy = policy;
  m.seed = cfg.seed();
  m.sigma = cfg.workload.sigma;
  m.i_count = cfg.workload.n_vnfs;
  m.n_nodes = static_cast<int>(s.physical.size());
  m.horizon = cfg.horizon();
  return m;
}

// Per-slot capacity assertion with reactive recovery.
class CapacityGuard {
 public:
  explicit CapacityGuard(std::span<const KpiVector> capacities) : caps_(capacities) {}

  std::int64_t enforce(PlacementMap& placement, std::span<const KpiVector> kpis, std::span<const double> v,
                       RunMetrics& m) {
    auto loads = node_loads(placement, kpis, caps_.size());
    m.capacity_checks += static_cast<std::int64_t>(caps_.size());
    const auto hot = overloaded_nodes(loads, caps_);
    if (hot.empty()) return 0;
    m.overload_events += static_cast<std::int64_t>(hot.size());
    const auto moves = reactive_repair(placement, kpis, v, caps_);
    m.reactive_migrations += moves;
    loads = node_loads(placement, kpis, caps_.size());
    m.unresolved_violations += static_cast<std::int64_t>(overloaded_nodes(loads, caps_).size());
    return moves;
  }

 private:
  std::span<const KpiVector> caps_;
};

void finish_totals(RunMetrics& m) {
  m.migrations_total = 0;
  m.messages_total = 0;
  for (const auto& e : m.epochs) {
    m.migrations_total += e.migrations;
    m.messages_total += e.messages;
  }
}

RunMetrics simulate(const ScenarioConfig& cfg, Policy policy) {
  const Setup s = make_setup(cfg);
  const bool adaptive = policy == Policy::ztorch;
  const std::size_t n_vnfs = s.means.size();
  const std::size_t dims = cfg.workload.dims;
  const Exec exec = cfg.exec;
  const std::int64_t horizon = cfg.horizon();
  RunMetrics m = blank_metrics(cfg, policy, s);

  TraceGenerator gen(s.means, cfg.workload.sigma, cfg.seed());
  std::vector<KpiVector> kpis(n_vnfs);
  gen.next(kpis, exec);
  std::vector<KpiVector> last_sample = kpis;

  BlindStart start = blind_start(kpis, cfg.initial_n_groups, s.planning, exec);
  AffinityModel model = std::move(start.model);
  std::vector<double> v = std::move(start.variances);
  PlacementMap placement = std::move(start.placement);

  SampleWindow window(n_vnfs, dims, 2);
  window.begin_epoch();
  if (adaptive) window.add(kpis);

  GroupCountController groups(cfg.initial_n_groups, cfg.effective_max_groups());
  EpochController learner(cfg.qlearning, cfg.seed());
  learner.state().omega = cfg.initial_omega;
  const int n_intervals = static_cast<int>(cfg.intervals.size());
  int interval_index = adaptive ? cfg.initial_interval_index : 1;
  CapacityGuard guard(s.physical);

  EpochRecord cur;
  cur.interval_index = interval_index;
  cur.n_groups = static_cast<int>(model.n_groups());
  cur.messages = static_cast<std::int64_t>(n_vnfs);

  std::int64_t t = 0;
  try {
    cur.migrations += guard.enforce(placement, kpis, v, m);

    std::int64_t epoch_start = 0;
    std::int64_t next_decision = cfg.initial_omega;
    std::vector<char> deviated(n_vnfs, 0);
    std::int64_t j = 0;
    int strikes = 0;

    for (t = 1; t < horizon; ++t) {
      gen.next(kpis, exec);
      const std::int64_t interval = cfg.intervals[static_cast<std::size_t>(interval_index - 1)];
      if ((t - epoch_start) % interval == 0) {
        cur.messages += static_cast<std::int64_t>(n_vnfs);
        last_sample = kpis;
        if (adaptive) {
          window.add(kpis);
          const auto devs = detect_deviations(model, std::span<const KpiVector>(kpis), exec);
          for (int id : devs)
            if (!deviated[static_cast<std::size_t>(id)]) {
              deviated[static_cast<std::size_t>(id)] = 1;
              ++j;
            }
          // Alert: the decisional point moves up to the next sample point.
          if (!devs.empty()) next_decision = std::min(next_decision, t + interval);
        }
      }

      if (t == next_decision) {
        const bool dev = j > 0;
        bool rebind = false;
        std::int64_t next_omega = cfg.initial_omega;
        bool replace = true;
        if (adaptive) {
          strikes = dev ? strikes + 1 : 0;
          const int target = groups.update(dev);
          rebind = dev && strikes >= cfg.rebind_strikes;
          const bool grow = cfg.grow_rebind && !dev && target > static_cast<int>(model.n_groups());
          if (rebind || grow) {
            model = bind_groups(window.per_vnf_mean(exec), target, exec);
            strikes = 0;
          }
          v = compute_variances(window, model, exec);
          switch (cfg.placement_trigger) {
            case PlacementTrigger::every_decision: replace = true; break;
            case PlacementTrigger::any_rebind: replace = rebind || grow; break;
            case PlacementTrigger::deviation_rebind: replace = rebind; break;
          }
        } else {
          model = bind_groups(last_sample, cfg.initial_n_groups, exec);
          rebind = true;
        }
        PlacementMap next = replace ? place(model, v, last_sample, s.planning) : placement;
        align_node_labels(next, placement, s.physical);
        cur.migrations += count_migrations(placement, next);
        placement = std::move(next);

        cur.omega = t - epoch_start;
        cur.deviations = j;
        cur.rebind = rebind;
        m.epochs.push_back(cur);

        if (adaptive) {
          next_omega = learner.close_epoch(cur.omega, j);
          interval_index = update_monitoring_interval(interval_index, dev, rebind, n_intervals,
                                                      cfg.default_interval_index);
          window.begin_epoch();
        }
        epoch_start = t;
        next_decision = t + next_omega;
        std::fill(deviated.begin(), deviated.end(), 0);
        j = 0;
        cur = EpochRecord{};
        cur.tau = static_cast<std::int64_t>(m.epochs.size());
        cur.start_slot = t;
        cur.interval_index = interval_index;
        cur.n_groups = static_cast<int>(model.n_groups());
      }

      cur.migrations += guard.enforce(placement, kpis, v, m);
    }
    // Tail: slots after the last decisional point.
    cur.omega = horizon - cur.start_slot;
    cur.deviations = j;
    m.epochs.push_back(cur);
  } catch (const InfeasibleError& e) {
    throw InfeasibleError(std::string(e.what()) + " (seed " + std::to_string(cfg.seed()) + ", slot " +
                              std::to_string(t) + ", epoch " + std::to_string(m.epochs.size()) + ")",
                          e.vnf_id(), t, static_cast<std::int64_t>(m.epochs.size()), cfg.seed());
  }
  finish_totals(m);
  return m;
}

// Dense DP over every VNF -> node assignment, one Hamming distance transform
// and one feasibility mask per slot.
class ExactOptimum {
 public:
  ExactOptimum(std::span<const int> start, std::vector<KpiVector> capacities)
      : n_vnfs_(start.size()), n_nodes_(capacities.size()), caps_(std::move(capacities)) {
    if (n_vnfs_ == 0 || n_vnfs_ > static_cast<std::size_t>(kExactOptimumMaxVnfs) || n_nodes_ == 0 ||
        n_nodes_ > static_cast<std::size_t>(kExactOptimumMaxNodes))
      throw GuardError("exact optimum: needs 1..12 VNFs and 1..3 nodes");
    n_states_ = 1;
    for (std::size_t i = 0; i < n_vnfs_; ++i) n_states_ *= n_nodes_;
    // Node membership masks per state.
    masks_.resize(n_states_ * n_nodes_);
    for (std::size_t p = 0; p < n_states_; ++p) {
      std::size_t code = p;
      for (std::size_t i = 0; i < n_vnfs_; ++i) {
        masks_[p * n_nodes_ + code % n_nodes_] |= static_cast<std::uint16_t>(1u << i);
        code /= n_nodes_;
      }
    }
    std::size_t code = 0;
    for (std::size_t i = n_vnfs_; i-- > 0;) {
      const int l = start[i];
      if (l < 0 || static_cast<std::size_t>(l) >= n_nodes_) throw ContractViolation("exact optimum: bad start node");
      code = code * n_nodes_ + static_cast<std::size_t>(l);
    }
    cost_.assign(n_states_, kInf);
    cost_[code] = 0;
    subset_fit_.resize(n_nodes_ << n_vnfs_);
  }

  void observe(std::span<const KpiVector> kpis) {
    if (kpis.size() != n_vnfs_) throw ContractViolation("exact optimum: slot size mismatch");
    transform();
    const std::size_t subsets = std::size_t{1} << n_vnfs_;
    std::vector<KpiVector> load(subsets, KpiVector(kpis.front().size()));
    for (std::size_t sset = 1; sset < subsets; ++sset) {
      const auto low = static_cast<std::size_t>(std::countr_zero(sset));
      load[sset] = load[sset & (sset - 1)] + kpis[low];
    }
    for (std::size_t l = 0; l < n_nodes_; ++l)
      for (std::size_t sset = 0; sset < subsets; ++sset)
        subset_fit_[(l << n_vnfs_) + sset] = load[sset].fits_within(caps_[l]) ? 1 : 0;
    for (std::size_t p = 0; p < n_states_; ++p) {
      if (cost_[p] == kInf) continue;
      for (std::size_t l = 0; l < n_nodes_; ++l)
        if (!subset_fit_[(l << n_vnfs_) + masks_[p * n_nodes_ + l]]) {
          cost_[p] = kInf;
          break;
        }
    }
  }

  std::int64_t value() const {
    const auto best = *std::min_element(cost_.begin(), cost_.end());
    if (best == kInf) throw InfeasibleError("exact optimum: no feasible placement sequence", -1);
    return static_cast<std::int64_t>(best);
  }

 private:
  static constexpr std::uint32_t kInf = std::numeric_limits<std::uint32_t>::max();

  // d'(P) = min_Q d(Q) + Hamming(P, Q), one coordinate at a time.
  void transform() {
    std::size_t stride = 1;
    for (std::size_t i = 0; i < n_vnfs_; ++i) {
      const std::size_t block = stride * n_nodes_;
      for (std::size_t base = 0; base < n_states_; base += block)
        for (std::size_t off = 0; off < stride; ++off) {
          std::uint32_t lo = kInf;
          for (std::size_t d = 0; d < n_nodes_; ++d) lo = std::min(lo, cost_[base + off + d * stride]);
          if (lo == kInf) continue;
          for (std::size_t d = 0; d < n_nodes_; ++d) {
            auto& c = cost_[base + off + d * stride];
            c = std::min(c, lo + 1);
          }
        }
      stride = block;
    }
  }

  std::size_t n_vnfs_;
  std::size_t n_nodes_;
  std::vector<KpiVector> caps_;
  std::size_t n_states_ = 0;
  std::vector<std::uint16_t> masks_;
  std::vector<std::uint32_t> cost_;
  std::vector<char> subset_fit_;
};

}  // namespace

std::int64_t optimum_migrations_exact(std::span<const std::vector<KpiVector>> slots, std::span<const int> start,
                                      std::span<const KpiVector> capacities) {
  ExactOptimum dp(start, {capacities.begin(), capacities.end()});
  for (const auto& s : slots) dp.observe(s);
  return dp.value();
}

OptimumLowerBound::OptimumLowerBound(std::vector<int> start, std::vector<KpiVector> capacities)
    : start_(std::move(start)), capacities_(std::move(capacities)), residents_(capacities_.size()),
      need_(capacities_.size(), 0) {
  for (std::size_t i = 0; i < start_.size(); ++i) {
    const int l = start_[i];
    if (l < 0 || static_cast<std::size_t>(l) >= capacities_.size())
      throw ContractViolation("optimum bound: bad start node");
    residents_[static_cast<std::size_t>(l)].push_back(static_cast<int>(i));
  }
}

void OptimumLowerBound::observe(std::span<const KpiVector> kpis) {
  if (kpis.size() != start_.size()) throw ContractViolation("optimum bound: slot size mismatch");
  for (std::size_t l = 0; l < capacities_.size(); ++l) {
    const auto& res = residents_[l];
    if (static_cast<std::int64_t>(res.size()) <= need_[l]) continue;
    for (std::size_t z = 0; z < capacities_[l].size(); ++z) {
      double total = 0.0;
      for (int id : res) total += kpis[static_cast<std::size_t>(id)][z];
      if (total <= capacities_[l][z] + 1e-12) continue;
      scratch_.clear();
      for (int id : res) scratch_.push_back(kpis[static_cast<std::size_t>(id)][z]);
      std::sort(scratch_.begin(), scratch_.end(), std::greater<>());
      std::int64_t k = 0;
      // Biggest first gives the fewest removals for this KPI alone.
      for (double x : scratch_) {
        if (total <= capacities_[l][z] + 1e-12) break;
        total -= x;
        ++k;
      }
      need_[l] = std::max(need_[l], k);
    }
  }
}

std::int64_t OptimumLowerBound::value() const {
  std::int64_t s = 0;
  for (auto n : need_) s += n;
  return s;
}

RunMetrics run(const ScenarioConfig& cfg) { return simulate(cfg, Policy::ztorch); }

RunMetrics run_instant_placement(const ScenarioConfig& cfg) { return simulate(cfg, Policy::instant); }

RunMetrics run_optimum(const ScenarioConfig& cfg) {
  const Setup s = make_setup(cfg);
  RunMetrics m = blank_metrics(cfg, Policy::optimum, s);
  TraceGenerator gen(s.means, cfg.workload.sigma, cfg.seed());
  std::vector<KpiVector> kpis(s.means.size());
  gen.next(kpis, cfg.exec);
  const BlindStart start = blind_start(kpis, cfg.initial_n_groups, s.planning, cfg.exec);

  const bool exact = s.means.size() <= static_cast<std::size_t>(kExactOptimumMaxVnfs) &&
                     s.physical.size() <= static_cast<std::size_t>(kExactOptimumMaxNodes);
  if (!exact && !cfg.bounded_optimum)
    throw GuardError("exact optimum needs I <= 12 and L <= 3; enable the bounded variant for larger runs");

  std::int64_t value = 0;
  if (exact) {
    ExactOptimum dp(start.placement.vnf_to_node, s.physical);
    dp.observe(kpis);
    for (std::int64_t t = 1; t < cfg.horizon(); ++t) {
      gen.next(kpis, cfg.exec);
      dp.observe(kpis);
    }
    value = dp.value();
    m.optimum_kind = OptimumKind::exact;
  } else {
    OptimumLowerBound lb(start.placement.vnf_to_node, s.physical);
    lb.observe(kpis);
    for (std::int64_t t = 1; t < cfg.horizon(); ++t) {
      gen.next(kpis, cfg.exec);
      lb.observe(kpis);
    }
    value = lb.value();
    m.optimum_kind = OptimumKind::bounded;
  }
  EpochRecord rec;
  rec.omega = cfg.horizon();
  rec.n_groups = static_cast<int>(start.model.n_groups());
  rec.migrations = value;
  m.epochs.push_back(rec);
  finish_totals(m);
  return m;
}

RunMetrics run_policy(const ScenarioConfig& cfg) {
  switch (cfg.policy) {
    case Policy::ztorch: return run(cfg);
    case Policy::instant: return run_instant_placement(cfg);
    case Policy::optimum: return run_optimum(cfg);
  }
  throw ConfigError("unknown policy");
}

double qod(std::int64_t solution_migrations, std::int64_t optimum_migrations) {
  if (solution_migrations < 0 || optimum_migrations < 0) throw ContractViolation("qod: negative migrations");
  if (solution_migrations == 0) return 1.0;
  return std::min(1.0, static_cast<double>(optimum_migrations) / static_cast<double>(solution_migrations));
}

double normalized_monitoring_load(std::int64_t ztorch_messages, std::int64_t instant_messages) {
  if (instant_messages <= 0) throw ContractViolation("monitoring load: instant message count must be > 0");
  return static_cast<double>(ztorch_messages) / static_cast<double>(instant_messages);
}

void write_results_header(std::ostream& os) {
  os << csv::schema_line(kResultsSchema) << '\n'
     << "run_id,policy,seed,sigma,i_count,tau,omega,interval_index,n_groups,deviations,migrations,messages\n";
}

void write_results_rows(std::ostream& os, const std::string& run_id, const RunMetrics& m) {
  const auto sigma = csv::format_double(m.sigma);
  for (const auto& e : m.epochs)
    os << run_id << ',' << to_string(m.policy) << ',' << m.seed << ',' << sigma << ',' << m.i_count << ',' << e.tau
       << ',' << e.omega << ',' << e.interval_index << ',' << e.n_groups << ',' << e.deviations << ','
       << e.migrations << ',' << e.messages << '\n';
}

namespace {

const char* kind_name(OptimumKind k) {
  switch (k) {
    case OptimumKind::exact: return "exact";
    case OptimumKind::bounded: return "bounded";
    case OptimumKind::none: break;
  }
  return "";
}

}  // namespace

void write_summary_header(std::ostream& os) {
  os << csv::schema_line(kSummarySchema) << '\n'
     << "run_id,policy,seed,sigma,i_count,n_nodes,horizon,epochs,migrations_total,reactive_migrations,"
        "messages_total,capacity_checks,overload_events,unresolved_violations,mean_omega,"
        "mean_interval_index,mean_n_groups,optimum_kind,optimum_migrations,qod,monitoring_load\n";
}

void write_summary_row(std::ostream& os, const RunSummary& s) {
  const auto& m = s.metrics;
  os << s.run_id << ',' << to_string(m.policy) << ',' << m.seed << ',' << csv::format_double(m.sigma) << ','
     << m.i_count << ',' << m.n_nodes << ',' << m.horizon << ',' << m.epochs.size() << ',' << m.migrations_total
     << ',' << m.reactive_migrations << ',' << m.messages_total << ',' << m.capacity_checks << ','
     << m.overload_events << ',' << m.unresolved_violations << ',' << csv::format_double(m.mean_omega()) << ','
     << csv::format_double(m.mean_interval_index()) << ',' << csv::format_double(m.mean_n_groups()) << ','
     << kind_name(s.optimum_kind) << ',';
  if (s.optimum_migrations) os << *s.optimum_migrations;
  os << ',';
  if (s.qod) os << csv::format_double(*s.qod);
  os << ',';
  if (s.monitoring_load) os << csv::format_double(*s.monitoring_load);
  os << '\n';
}

}  // namespace ztorch
