#pragma once

#include <cstdint>
#include <deque>
#include <span>
#include <vector>

#include "ztorch/domain.hpp"
#include "ztorch/parallel.hpp"

namespace ztorch {

/// Keeps the log objective finite on idle nodes.
inline constexpr double kLogEpsilon = 1e-6;

/// Exact solver guard on the number of groups.
inline constexpr std::size_t kGroupSolverMaxGroups = 16;

struct PlacementProblem {
  std::vector<KpiVector> centers;     // c_n
  std::vector<KpiVector> capacities;  // P_l

  void validate() const;
};

/// group_to_node[n] is a node index or -1 (left unassigned).
struct GroupPlacement {
  std::vector<int> group_to_node;
  double objective = 0.0;
  int assigned = 0;
};

/// sum_l log(eps + sum_n |c_n|_1 y_{l,n}). Node terms are summed in sorted
/// order so relabelling identical nodes gives a bit-identical value.
/// Returns -inf when the assignment breaks a capacity.
double placement_objective(const PlacementProblem& prob, std::span<const int> group_to_node);

/// Exact arg-max by branch-and-bound. Ties: more groups assigned wins, then the
/// lexicographically smallest assignment with "unassigned" ordered after every
/// node.
GroupPlacement solve_group_placement(const PlacementProblem& prob);

namespace testing {
/// Negative-control hook for the oracle suite: makes the solver return a
/// tied but wrongly ordered assignment. Never set outside tests.
void set_faulty_tie_break(bool on) noexcept;
bool faulty_tie_break() noexcept;
}  // namespace testing

/// Plain (L+1)^N enumeration with the same ordering. Oracle for the solver.
GroupPlacement enumerate_group_placement(const PlacementProblem& prob);

/// Node count giving aggregate capacity ~headroom x the expected aggregate
/// demand, per KPI, taking the tightest KPI.
int auto_size_nodes(std::span<const KpiVector> vnf_means, const KpiVector& capacity, double headroom = 2.0);

/// Per-VNF samples from the last few surveillance epochs, stored flat.
class SampleWindow {
 public:
  SampleWindow(std::size_t n_vnfs, std::size_t dims, std::size_t max_epochs = 2);

  /// Opens a new epoch, dropping the oldest once more than max_epochs are held.
  void begin_epoch();
  void add(std::span<const KpiVector> snapshot);
  void clear();

  std::size_t n_vnfs() const noexcept { return n_vnfs_; }
  std::size_t dims() const noexcept { return dims_; }
  std::size_t sample_count() const noexcept;
  KpiVector sample(std::size_t k, std::size_t vnf) const;

  /// Binding points: each VNF's mean over the window.
  std::vector<KpiVector> per_vnf_mean(Exec exec = Exec::parallel) const;

 private:
  std::size_t n_vnfs_;
  std::size_t dims_;
  std::size_t max_epochs_;
  std::deque<std::vector<double>> epochs_;  // sample-major: [sample][vnf][z]
};

/// v_i = max over window samples of |p_i(t) - c_{group(i)}|. Dense by vnf id.
std::vector<double> compute_variances(const SampleWindow& window, const AffinityModel& model,
                                      Exec exec = Exec::parallel);

/// Affinity-aware VNF scheduling. Buckets by group sorted by v descending, then
/// round-robin over groups onto each group's node using the latest KPIs for the
/// fit test; leftovers overflow to the next node index (wrapping). Unassigned
/// groups start from node 0.
PlacementMap aavs_place(const AffinityModel& model, std::span<const double> variances,
                        std::span<const int> group_to_node, std::span<const KpiVector> latest_kpis,
                        std::span<const KpiVector> capacities);

/// Renames nodes of `next` so it keeps as many VNFs as possible where `prev`
/// had them. Only nodes with identical capacity are swapped, so loads and the
/// group objective are unchanged. Solved as an assignment problem.
void align_node_labels(PlacementMap& next, const PlacementMap& prev, std::span<const KpiVector> capacities);

/// Ids whose node differs between prev and next; an empty prev counts 0.
std::int64_t count_migrations(const PlacementMap& prev, const PlacementMap& next);

/// Aggregate per-node load of a VNF placement under the given KPIs.
std::vector<KpiVector> node_loads(const PlacementMap& placement, std::span<const KpiVector> kpis,
                                  std::size_t n_nodes);

/// Nodes whose load exceeds capacity in some KPI.
std::vector<int> overloaded_nodes(std::span<const KpiVector> loads, std::span<const KpiVector> capacities);

/// Mid-epoch recovery: while a node is overloaded, move its highest-v VNF that
/// fits somewhere to the least-loaded node with room. Returns the number of
/// moves. Throws InfeasibleError when an overloaded node has nothing movable.
std::int64_t reactive_repair(PlacementMap& placement, std::span<const KpiVector> kpis,
                             std::span<const double> variances, std::span<const KpiVector> capacities);

}  // namespace ztorch
