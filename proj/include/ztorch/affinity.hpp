#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "ztorch/domain.hpp"
#include "ztorch/parallel.hpp"

namespace ztorch {

/// Grid spacing schedule for the snapped k-means. In percent units the spacing
/// at step t is 100 / 2^I * t^sqrt(I); here it is evaluated in log space on the
/// normalized [0,1] axis and clamped to [delta_min, delta_max].
struct GridSchedule {
  std::size_t i_count = 1;
  double delta_min = 1e-4;
  double delta_max = 1.7320508075688772;  // sqrt(3)

  static GridSchedule for_points(std::size_t i_count, std::size_t dims);

  double delta(std::int64_t step) const;
  void validate() const;
};

/// Nearest point of the spacing-`delta` lattice inside [0,1]^Z.
KpiVector snap_to_grid(const KpiVector& c, double delta);

/// N centers equally spaced on the main diagonal: ((2k-1)/(2N), ...), k = 1..N.
std::vector<KpiVector> initial_centers(int n, std::size_t dims);

/// Index of the nearest center; ties go to the lowest index.
int nearest_center(const KpiVector& p, std::span<const KpiVector> centers);

/// Assignment kernel: out[i] = nearest_center(points[i]). The parallel and
/// serial paths return identical results.
void assign_nearest(std::span<const ProfilePoint> points, std::span<const KpiVector> centers,
                    std::span<int> out, Exec exec = Exec::parallel);

struct EkmOptions {
  int max_steps = 500;
  bool refine = true;  // Lloyd polish on the delta_min lattice after the schedule stops
  Exec exec = Exec::parallel;
};

struct EkmResult {
  AffinityModel model;
  int steps = 0;
};

/// Enhanced k-means: nearest-center assignment, centroid update, snap to the
/// grid of the current step, repeat until the snapped centers stop moving.
/// Empty groups are refilled with the point farthest from its own center.
EkmResult ekm(std::span<const ProfilePoint> points, int n, const GridSchedule& schedule,
              const EkmOptions& options = {});

/// Sum over VNFs of the Euclidean distance to their group's center.
double affinity_objective(const AffinityModel& model, std::span<const ProfilePoint> points);

struct BruteForceAffinity {
  AffinityModel model;
  double objective = 0.0;
};

inline constexpr std::size_t kBruteForceMaxPoints = 12;

/// Exact optimum by enumerating every partition into exactly n non-empty
/// groups. Each group's center is the point minimizing the summed distance
/// (geometric median), so the result lower-bounds any feasible model.
BruteForceAffinity brute_force_affinity(std::span<const ProfilePoint> points, int n);

/// Ids whose nearest center in `snapshot` differs from their stored group.
std::vector<int> detect_deviations(const AffinityModel& model, std::span<const ProfilePoint> snapshot);

/// Dense variant for the simulator: snapshot[i] is VNF i.
std::vector<int> detect_deviations(const AffinityModel& model, std::span<const KpiVector> snapshot,
                                   Exec exec = Exec::serial);

/// Feedback controller for the number of affinity groups: shrink on deviations,
/// grow after two consecutive clean epochs.
class GroupCountController {
 public:
  GroupCountController(int initial_n, int max_n, int min_n = 2);

  int update(bool deviations_occurred);

  int current() const noexcept { return current_n_; }
  int min_n() const noexcept { return min_n_; }
  int max_n() const noexcept { return max_n_; }
  int stable_epochs() const noexcept { return stable_epochs_; }

 private:
  int current_n_;
  int min_n_;
  int max_n_;
  int stable_epochs_ = 0;
};

}  // namespace ztorch
