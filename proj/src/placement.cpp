#include "ztorch/placement.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <numeric>

namespace ztorch {

void PlacementProblem::validate() const {
  if (centers.empty()) throw ContractViolation("placement: need at least one group");
  if (capacities.empty()) throw ContractViolation("placement: need at least one node");
  const std::size_t dims = centers.front().size();
  for (const auto& c : centers)
    if (c.size() != dims) throw ContractViolation("placement: mixed center dimensions");
  for (const auto& p : capacities)
    if (p.size() != dims) throw ContractViolation("placement: capacity dimension mismatch");
}

double placement_objective(const PlacementProblem& prob, std::span<const int> group_to_node) {
  if (group_to_node.size() != prob.centers.size())
    throw ContractViolation("placement_objective: assignment size mismatch");
  const std::size_t n_nodes = prob.capacities.size();
  const std::size_t dims = prob.centers.front().size();
  std::vector<KpiVector> load(n_nodes, KpiVector(dims));
  std::vector<double> mass(n_nodes, 0.0);
  for (std::size_t n = 0; n < group_to_node.size(); ++n) {
    const int l = group_to_node[n];
    if (l < 0) continue;
    if (static_cast<std::size_t>(l) >= n_nodes) throw ContractViolation("placement_objective: bad node index");
    load[static_cast<std::size_t>(l)] += prob.centers[n];
    mass[static_cast<std::size_t>(l)] += l1_norm(prob.centers[n]);
  }
  std::vector<double> terms(n_nodes);
  for (std::size_t l = 0; l < n_nodes; ++l) {
    if (!load[l].fits_within(prob.capacities[l])) return -std::numeric_limits<double>::infinity();
    terms[l] = std::log(kLogEpsilon + mass[l]);
  }
  std::sort(terms.begin(), terms.end());
  double total = 0.0;
  for (double t : terms) total += t;
  return total;
}

namespace {

// Unassigned sorts after every real node.
bool lex_less(std::span<const int> a, std::span<const int> b, int n_nodes) {
  for (std::size_t i = 0; i < a.size(); ++i) {
    const int x = a[i] < 0 ? n_nodes : a[i];
    const int y = b[i] < 0 ? n_nodes : b[i];
    if (x != y) return x < y;
  }
  return false;
}

bool better(const GroupPlacement& a, const GroupPlacement& b, int n_nodes) {
  if (a.objective != b.objective) return a.objective > b.objective;
  if (a.assigned != b.assigned) return a.assigned > b.assigned;
  return lex_less(a.group_to_node, b.group_to_node, n_nodes);
}

GroupPlacement make_candidate(const PlacementProblem& prob, std::vector<int> assign) {
  GroupPlacement g;
  g.objective = placement_objective(prob, assign);
  g.assigned = static_cast<int>(std::count_if(assign.begin(), assign.end(), [](int l) { return l >= 0; }));
  g.group_to_node = std::move(assign);
  return g;
}

GroupPlacement greedy_placement(const PlacementProblem& prob) {
  const std::size_t n_groups = prob.centers.size();
  const std::size_t n_nodes = prob.capacities.size();
  const std::size_t dims = prob.centers.front().size();
  std::vector<std::size_t> order(n_groups);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return l1_norm(prob.centers[a]) > l1_norm(prob.centers[b]);
  });
  std::vector<KpiVector> load(n_nodes, KpiVector(dims));
  std::vector<double> mass(n_nodes, 0.0);
  std::vector<int> assign(n_groups, -1);
  for (std::size_t n : order) {
    int pick = -1;
    for (std::size_t l = 0; l < n_nodes; ++l) {
      if (!(load[l] + prob.centers[n]).fits_within(prob.capacities[l])) continue;
      if (pick < 0 || mass[l] < mass[static_cast<std::size_t>(pick)]) pick = static_cast<int>(l);
    }
    if (pick < 0) continue;
    assign[n] = pick;
    load[static_cast<std::size_t>(pick)] += prob.centers[n];
    mass[static_cast<std::size_t>(pick)] += l1_norm(prob.centers[n]);
  }
  return make_candidate(prob, std::move(assign));
}

class BranchAndBound {
 public:
  explicit BranchAndBound(const PlacementProblem& prob)
      : prob_(prob),
        n_groups_(prob.centers.size()),
        n_nodes_(prob.capacities.size()),
        load_(n_nodes_, KpiVector(prob.centers.front().size())),
        mass_(n_nodes_, 0.0),
        members_(n_nodes_, 0),
        assign_(n_groups_, -1) {
    for (const auto& c : prob.centers) group_mass_.push_back(l1_norm(c));
    best_ = greedy_placement(prob);
  }

  GroupPlacement solve() {
    dfs(0);
    return best_;
  }

 private:
  double current_value() const {
    double f = 0.0;
    for (double m : mass_) f += std::log(kLogEpsilon + m);
    return f;
  }

  // Concavity makes a group's gain largest on an empty-ish node, and the gain
  // of several groups on one node at most the sum of their solo gains.
  double upper_bound(std::size_t k) const {
    double ub = current_value();
    for (std::size_t g = k; g < n_groups_; ++g) {
      double gain = 0.0;
      for (std::size_t l = 0; l < n_nodes_; ++l) {
        if (!(load_[l] + prob_.centers[g]).fits_within(prob_.capacities[l])) continue;
        gain = std::max(gain, std::log(kLogEpsilon + mass_[l] + group_mass_[g]) - std::log(kLogEpsilon + mass_[l]));
      }
      ub += gain;
    }
    return ub;
  }

  bool is_shadowed(std::size_t l) const {
    // An empty node identical to a lower empty node: the mirrored subtree is
    // lexicographically larger with the same value.
    if (members_[l] != 0) return false;
    for (std::size_t j = 0; j < l; ++j)
      if (members_[j] == 0 && prob_.capacities[j] == prob_.capacities[l]) return true;
    return false;
  }

  void dfs(std::size_t k) {
    if (k == n_groups_) {
      auto cand = make_candidate(prob_, assign_);
      if (better(cand, best_, static_cast<int>(n_nodes_))) best_ = std::move(cand);
      return;
    }
    const double slack = 1e-9 * (1.0 + std::abs(best_.objective));
    if (upper_bound(k) < best_.objective - slack) return;

    const auto& c = prob_.centers[k];
    for (std::size_t l = 0; l < n_nodes_; ++l) {
      if (is_shadowed(l)) continue;
      if (!(load_[l] + c).fits_within(prob_.capacities[l])) continue;
      const KpiVector saved = load_[l];
      const double saved_mass = mass_[l];
      load_[l] += c;
      mass_[l] += group_mass_[k];
      ++members_[l];
      assign_[k] = static_cast<int>(l);
      dfs(k + 1);
      --members_[l];
      mass_[l] = saved_mass;
      load_[l] = saved;
    }
    assign_[k] = -1;
    dfs(k + 1);
  }

  const PlacementProblem& prob_;
  std::size_t n_groups_;
  std::size_t n_nodes_;
  std::vector<KpiVector> load_;
  std::vector<double> mass_;
  std::vector<int> members_;
  std::vector<int> assign_;
  std::vector<double> group_mass_;
  GroupPlacement best_;
};

}  // namespace

namespace testing {
namespace {
std::atomic<bool> g_faulty_tie_break{false};
}
void set_faulty_tie_break(bool on) noexcept { g_faulty_tie_break.store(on); }
bool faulty_tie_break() noexcept { return g_faulty_tie_break.load(); }
}  // namespace testing

GroupPlacement solve_group_placement(const PlacementProblem& prob) {
  prob.validate();
  if (prob.centers.size() > kGroupSolverMaxGroups)
    throw GuardError("solve_group_placement: at most " + std::to_string(kGroupSolverMaxGroups) + " groups");
  auto best = BranchAndBound(prob).solve();
  if (testing::faulty_tie_break()) {
    // Deliberately wrong: pick the mirror image over the last two identical
    // nodes, same objective but not the lexicographic winner.
    const int n = static_cast<int>(prob.capacities.size());
    for (int a = n - 2; a >= 0; --a) {
      if (!(prob.capacities[static_cast<std::size_t>(a)] == prob.capacities[static_cast<std::size_t>(a + 1)]))
        continue;
      for (int& l : best.group_to_node)
        l = l == a ? a + 1 : (l == a + 1 ? a : l);
      break;
    }
  }
  return best;
}

GroupPlacement enumerate_group_placement(const PlacementProblem& prob) {
  prob.validate();
  const std::size_t n_groups = prob.centers.size();
  const int n_nodes = static_cast<int>(prob.capacities.size());
  double count = std::pow(static_cast<double>(n_nodes + 1), static_cast<double>(n_groups));
  if (count > 5e7) throw GuardError("enumerate_group_placement: instance too large");

  // Digit value n_nodes stands for "unassigned" so counting order is lex order.
  std::vector<int> digits(n_groups, 0);
  std::vector<int> assign(n_groups);
  GroupPlacement best;
  bool have = false;
  while (true) {
    for (std::size_t i = 0; i < n_groups; ++i) assign[i] = digits[i] == n_nodes ? -1 : digits[i];
    auto cand = make_candidate(prob, assign);
    if (!have || better(cand, best, n_nodes)) {
      best = std::move(cand);
      have = true;
    }
    std::size_t i = n_groups;
    while (i > 0 && digits[i - 1] == n_nodes) digits[--i] = 0;
    if (i == 0) break;
    ++digits[i - 1];
  }
  return best;
}

int auto_size_nodes(std::span<const KpiVector> vnf_means, const KpiVector& capacity, double headroom) {
  if (vnf_means.empty()) throw ContractViolation("auto_size_nodes: empty population");
  if (!(headroom > 0.0)) throw ConfigError("node headroom must be > 0");
  KpiVector total(capacity.size());
  for (const auto& m : vnf_means) total += m;
  double worst = 0.0;
  for (std::size_t z = 0; z < capacity.size(); ++z) {
    if (!(capacity[z] > 0.0)) throw ConfigError("node capacity must be > 0 in every KPI");
    worst = std::max(worst, total[z] / capacity[z]);
  }
  return std::max(1, static_cast<int>(std::ceil(headroom * worst - 1e-9)));
}

SampleWindow::SampleWindow(std::size_t n_vnfs, std::size_t dims, std::size_t max_epochs)
    : n_vnfs_(n_vnfs), dims_(dims), max_epochs_(max_epochs) {
  if (max_epochs == 0) throw ContractViolation("SampleWindow: max_epochs must be >= 1");
}

void SampleWindow::begin_epoch() {
  epochs_.emplace_back();
  while (epochs_.size() > max_epochs_) epochs_.pop_front();
}

void SampleWindow::add(std::span<const KpiVector> snapshot) {
  if (snapshot.size() != n_vnfs_) throw ContractViolation("SampleWindow: snapshot size mismatch");
  if (epochs_.empty()) begin_epoch();
  auto& buf = epochs_.back();
  for (const auto& p : snapshot) {
    if (p.size() != dims_) throw ContractViolation("SampleWindow: KPI dimension mismatch");
    buf.insert(buf.end(), p.begin(), p.end());
  }
}

void SampleWindow::clear() { epochs_.clear(); }

std::size_t SampleWindow::sample_count() const noexcept {
  std::size_t n = 0;
  const std::size_t stride = n_vnfs_ * dims_;
  if (stride == 0) return 0;
  for (const auto& e : epochs_) n += e.size() / stride;
  return n;
}

KpiVector SampleWindow::sample(std::size_t k, std::size_t vnf) const {
  const std::size_t stride = n_vnfs_ * dims_;
  for (const auto& e : epochs_) {
    const std::size_t here = e.size() / stride;
    if (k < here) return KpiVector(std::span<const double>(e.data() + k * stride + vnf * dims_, dims_));
    k -= here;
  }
  throw ContractViolation("SampleWindow: sample index out of range");
}

std::vector<KpiVector> SampleWindow::per_vnf_mean(Exec exec) const {
  const std::size_t count = sample_count();
  if (count == 0) throw ContractViolation("SampleWindow: empty window");
  std::vector<KpiVector> out(n_vnfs_, KpiVector(dims_));
  const std::size_t stride = n_vnfs_ * dims_;
  auto one = [&](std::size_t i) {
    KpiVector sum(dims_);
    for (const auto& e : epochs_)
      for (std::size_t off = i * dims_; off < e.size(); off += stride)
        for (std::size_t z = 0; z < dims_; ++z) sum[z] += e[off + z];
    out[i] = sum * (1.0 / static_cast<double>(count));
  };
  const auto n = static_cast<std::ptrdiff_t>(n_vnfs_);
  if (exec == Exec::parallel) {
    ZT_OMP_PARALLEL_FOR_IF(n > 256)
    for (std::ptrdiff_t i = 0; i < n; ++i) one(static_cast<std::size_t>(i));
  } else {
    for (std::ptrdiff_t i = 0; i < n; ++i) one(static_cast<std::size_t>(i));
  }
  return out;
}

std::vector<double> compute_variances(const SampleWindow& window, const AffinityModel& model, Exec exec) {
  const std::size_t n_vnfs = window.n_vnfs();
  const std::size_t count = window.sample_count();
  if (count == 0) throw ContractViolation("compute_variances: empty window");
  for (std::size_t i = 0; i < n_vnfs; ++i)
    if (!model.covers(static_cast<int>(i))) throw ContractViolation("compute_variances: model misses a VNF");
  std::vector<double> v(n_vnfs, 0.0);
  auto one = [&](std::size_t i) {
    const auto& c = model.centers[static_cast<std::size_t>(model.group_of[i])];
    double worst = 0.0;
    for (std::size_t k = 0; k < count; ++k) worst = std::max(worst, squared_distance(window.sample(k, i), c));
    v[i] = std::sqrt(worst);
  };
  const auto n = static_cast<std::ptrdiff_t>(n_vnfs);
  if (exec == Exec::parallel) {
    ZT_OMP_PARALLEL_FOR_IF(n > 256)
    for (std::ptrdiff_t i = 0; i < n; ++i) one(static_cast<std::size_t>(i));
  } else {
    for (std::ptrdiff_t i = 0; i < n; ++i) one(static_cast<std::size_t>(i));
  }
  return v;
}

PlacementMap aavs_place(const AffinityModel& model, std::span<const double> variances,
                        std::span<const int> group_to_node, std::span<const KpiVector> latest_kpis,
                        std::span<const KpiVector> capacities) {
  const std::size_t n_vnfs = latest_kpis.size();
  const std::size_t n_groups = model.n_groups();
  const auto n_nodes = static_cast<int>(capacities.size());
  if (variances.size() != n_vnfs) throw ContractViolation("aavs_place: variances size mismatch");
  if (group_to_node.size() != n_groups) throw ContractViolation("aavs_place: group map size mismatch");
  if (n_nodes == 0) throw ContractViolation("aavs_place: no compute nodes");
  const std::size_t dims = capacities.front().size();

  std::vector<std::vector<int>> buckets(n_groups);
  for (std::size_t i = 0; i < n_vnfs; ++i) {
    if (!model.covers(static_cast<int>(i))) throw ContractViolation("aavs_place: model misses a VNF");
    buckets[static_cast<std::size_t>(model.group_of[i])].push_back(static_cast<int>(i));
  }
  for (auto& b : buckets)
    std::stable_sort(b.begin(), b.end(), [&](int a, int c) {
      return variances[static_cast<std::size_t>(a)] > variances[static_cast<std::size_t>(c)];
    });

  std::vector<int> target(n_groups, 0);
  for (std::size_t n = 0; n < n_groups; ++n) {
    const int l = group_to_node[n];
    if (l >= n_nodes) throw ContractViolation("aavs_place: group mapped to a missing node");
    target[n] = l < 0 ? 0 : l;
  }

  PlacementMap out;
  out.group_to_node.assign(group_to_node.begin(), group_to_node.end());
  out.vnf_to_node.assign(n_vnfs, -1);
  std::vector<KpiVector> load(static_cast<std::size_t>(n_nodes), KpiVector(dims));
  auto fits = [&](int id, int l) {
    return (load[static_cast<std::size_t>(l)] + latest_kpis[static_cast<std::size_t>(id)])
        .fits_within(capacities[static_cast<std::size_t>(l)]);
  };
  auto put = [&](int id, int l) {
    load[static_cast<std::size_t>(l)] += latest_kpis[static_cast<std::size_t>(id)];
    out.vnf_to_node[static_cast<std::size_t>(id)] = l;
  };

  // Round-robin over groups, one VNF per group per pass.
  std::vector<bool> closed(n_groups, false);
  bool progress = true;
  while (progress) {
    progress = false;
    for (std::size_t n = 0; n < n_groups; ++n) {
      auto& b = buckets[n];
      if (closed[n] || b.empty()) continue;
      auto it = std::find_if(b.begin(), b.end(), [&](int id) { return fits(id, target[n]); });
      if (it == b.end()) {
        closed[n] = true;
        continue;
      }
      put(*it, target[n]);
      b.erase(it);
      progress = true;
    }
  }

  // Overflow: l = l + 1 until something fits.
  for (std::size_t n = 0; n < n_groups; ++n) {
    for (int id : buckets[n]) {
      int placed = -1;
      for (int d = 1; d <= n_nodes && placed < 0; ++d) {
        const int l = (target[n] + d) % n_nodes;
        if (fits(id, l)) placed = l;
      }
      if (placed < 0) throw InfeasibleError("aavs_place: no node can host vnf " + std::to_string(id), id);
      put(id, placed);
    }
  }
  return out;
}

namespace {

// Hungarian method on a square cost matrix (row-major), returns the column of each row.
std::vector<int> min_cost_assignment(const std::vector<double>& cost, std::size_t n) {
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
  std::vector<std::size_t> p(n + 1, 0), way(n + 1, 0);
  for (std::size_t i = 1; i <= n; ++i) {
    p[0] = i;
    std::size_t j0 = 0;
    std::vector<double> minv(n + 1, inf);
    std::vector<char> used(n + 1, 0);
    do {
      used[j0] = 1;
      const std::size_t i0 = p[j0];
      double delta = inf;
      std::size_t j1 = 0;
      for (std::size_t j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double cur = cost[(i0 - 1) * n + (j - 1)] - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (std::size_t j = 0; j <= n; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const std::size_t j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  std::vector<int> row_to_col(n, -1);
  for (std::size_t j = 1; j <= n; ++j)
    if (p[j] != 0) row_to_col[p[j] - 1] = static_cast<int>(j - 1);
  return row_to_col;
}

}  // namespace

void align_node_labels(PlacementMap& next, const PlacementMap& prev, std::span<const KpiVector> capacities) {
  if (prev.vnf_to_node.empty()) return;
  if (prev.vnf_to_node.size() != next.vnf_to_node.size())
    throw ContractViolation("align_node_labels: VNF sets differ");
  const std::size_t n = capacities.size();
  // overlap[a][b]: VNFs on node a in next that sat on node b before.
  std::vector<double> cost(n * n, 0.0);
  for (std::size_t i = 0; i < next.vnf_to_node.size(); ++i) {
    const int a = next.vnf_to_node[i];
    const int b = prev.vnf_to_node[i];
    if (a >= 0 && b >= 0) cost[static_cast<std::size_t>(a) * n + static_cast<std::size_t>(b)] -= 1.0;
  }
  // Forbid swapping nodes that are not interchangeable. The tiny diagonal
  // preference keeps labels put when nothing is gained.
  const double forbid = static_cast<double>(next.vnf_to_node.size() + 1);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) {
      if (!(capacities[a] == capacities[b])) cost[a * n + b] = forbid;
      else if (a == b) cost[a * n + b] -= 1e-3;
    }
  const auto rename = min_cost_assignment(cost, n);
  for (auto& l : next.vnf_to_node)
    if (l >= 0) l = rename[static_cast<std::size_t>(l)];
  for (auto& l : next.group_to_node)
    if (l >= 0) l = rename[static_cast<std::size_t>(l)];
}

std::int64_t count_migrations(const PlacementMap& prev, const PlacementMap& next) {
  if (prev.vnf_to_node.empty()) return 0;
  if (prev.vnf_to_node.size() != next.vnf_to_node.size())
    throw ContractViolation("count_migrations: VNF sets differ");
  std::int64_t moved = 0;
  for (std::size_t i = 0; i < prev.vnf_to_node.size(); ++i)
    if (prev.vnf_to_node[i] != next.vnf_to_node[i]) ++moved;
  return moved;
}

std::vector<KpiVector> node_loads(const PlacementMap& placement, std::span<const KpiVector> kpis,
                                  std::size_t n_nodes) {
  if (placement.vnf_to_node.size() != kpis.size()) throw ContractViolation("node_loads: size mismatch");
  const std::size_t dims = kpis.empty() ? kDefaultKpis : kpis.front().size();
  std::vector<KpiVector> load(n_nodes, KpiVector(dims));
  for (std::size_t i = 0; i < kpis.size(); ++i) {
    const int l = placement.vnf_to_node[i];
    if (l < 0) continue;
    if (static_cast<std::size_t>(l) >= n_nodes) throw ContractViolation("node_loads: bad node index");
    load[static_cast<std::size_t>(l)] += kpis[i];
  }
  return load;
}

std::vector<int> overloaded_nodes(std::span<const KpiVector> loads, std::span<const KpiVector> capacities) {
  std::vector<int> out;
  for (std::size_t l = 0; l < loads.size(); ++l)
    if (!loads[l].fits_within(capacities[l])) out.push_back(static_cast<int>(l));
  return out;
}

std::int64_t reactive_repair(PlacementMap& placement, std::span<const KpiVector> kpis,
                             std::span<const double> variances, std::span<const KpiVector> capacities) {
  const std::size_t n_nodes = capacities.size();
  auto load = node_loads(placement, kpis, n_nodes);
  std::int64_t moves = 0;
  while (true) {
    const auto hot = overloaded_nodes(load, capacities);
    if (hot.empty()) return moves;
    const int src = hot.front();
    std::vector<int> residents;
    for (std::size_t i = 0; i < kpis.size(); ++i)
      if (placement.vnf_to_node[i] == src) residents.push_back(static_cast<int>(i));
    std::stable_sort(residents.begin(), residents.end(), [&](int a, int b) {
      return variances[static_cast<std::size_t>(a)] > variances[static_cast<std::size_t>(b)];
    });
    bool moved = false;
    for (int id : residents) {
      const auto& p = kpis[static_cast<std::size_t>(id)];
      int dst = -1;
      double dst_load = 0.0;
      for (std::size_t l = 0; l < n_nodes; ++l) {
        if (static_cast<int>(l) == src || !(load[l] + p).fits_within(capacities[l])) continue;
        const double m = l1_norm(load[l]);
        if (dst < 0 || m < dst_load) {
          dst = static_cast<int>(l);
          dst_load = m;
        }
      }
      if (dst < 0) continue;
      load[static_cast<std::size_t>(src)] -= p;
      load[static_cast<std::size_t>(dst)] += p;
      placement.vnf_to_node[static_cast<std::size_t>(id)] = dst;
      ++moves;
      moved = true;
      break;
    }
    if (!moved) {
      const int id = residents.empty() ? -1 : residents.front();
      throw InfeasibleError("reactive repair: node " + std::to_string(src) + " stays overloaded", id);
    }
  }
}

}  // namespace ztorch
