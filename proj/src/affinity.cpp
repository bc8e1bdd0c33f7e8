#include "ztorch/affinity.hpp"

#include <cmath>
#include <limits>
#include <numbers>

namespace ztorch {

GridSchedule GridSchedule::for_points(std::size_t i_count, std::size_t dims) {
  GridSchedule s;
  s.i_count = i_count;
  s.delta_max = std::sqrt(static_cast<double>(dims));
  return s;
}

void GridSchedule::validate() const {
  if (!(delta_min > 0.0) || !(delta_min <= delta_max))
    throw ContractViolation("GridSchedule: need 0 < delta_min <= delta_max");
}

double GridSchedule::delta(std::int64_t step) const {
  if (step <= 0) return delta_min;
  const double i = static_cast<double>(i_count);
  const double log_delta = -i * std::numbers::ln2 + std::sqrt(i) * std::log(static_cast<double>(step));
  if (log_delta >= std::log(delta_max)) return delta_max;
  if (log_delta <= std::log(delta_min)) return delta_min;
  return std::clamp(std::exp(log_delta), delta_min, delta_max);
}

KpiVector snap_to_grid(const KpiVector& c, double delta) {
  if (!(delta > 0.0)) throw ContractViolation("snap_to_grid: delta must be > 0");
  // Divide by the inverse spacing so lattice points such as 0.2 at 1e-4 come
  // back bit-exact.
  const double inv = 1.0 / delta;
  const double k_max = std::floor(inv * (1.0 + 1e-12));
  KpiVector out(c.size());
  for (std::size_t z = 0; z < c.size(); ++z) {
    const double k = std::clamp(std::round(c[z] * inv), 0.0, k_max);
    out[z] = k / inv;
  }
  return out;
}

std::vector<KpiVector> initial_centers(int n, std::size_t dims) {
  if (n < 2) throw ContractViolation("initial_centers: need N >= 2");
  std::vector<KpiVector> centers;
  centers.reserve(static_cast<std::size_t>(n));
  for (int k = 1; k <= n; ++k)
    centers.emplace_back(dims, static_cast<double>(2 * k - 1) / static_cast<double>(2 * n));
  return centers;
}

int nearest_center(const KpiVector& p, std::span<const KpiVector> centers) {
  int best = -1;
  double best_d = std::numeric_limits<double>::infinity();
  for (std::size_t n = 0; n < centers.size(); ++n) {
    const double d = squared_distance(p, centers[n]);
    if (d < best_d) {
      best_d = d;
      best = static_cast<int>(n);
    }
  }
  return best;
}

void assign_nearest(std::span<const ProfilePoint> points, std::span<const KpiVector> centers,
                    std::span<int> out, Exec exec) {
  if (out.size() != points.size()) throw ContractViolation("assign_nearest: output size mismatch");
  const auto n = static_cast<std::ptrdiff_t>(points.size());
  if (exec == Exec::parallel) {
    ZT_OMP_PARALLEL_FOR_IF(n > 256)
    for (std::ptrdiff_t i = 0; i < n; ++i)
      out[static_cast<std::size_t>(i)] = nearest_center(points[static_cast<std::size_t>(i)].kpis, centers);
  } else {
    for (std::ptrdiff_t i = 0; i < n; ++i)
      out[static_cast<std::size_t>(i)] = nearest_center(points[static_cast<std::size_t>(i)].kpis, centers);
  }
}

namespace {

std::vector<int> dense_assignment(std::span<const ProfilePoint> points, std::span<const int> by_pos) {
  int max_id = -1;
  for (const auto& p : points) {
    if (p.vnf_id < 0) throw ContractViolation("negative vnf_id");
    max_id = std::max(max_id, p.vnf_id);
  }
  std::vector<int> group_of(static_cast<std::size_t>(max_id + 1), -1);
  for (std::size_t i = 0; i < points.size(); ++i) {
    auto& slot = group_of[static_cast<std::size_t>(points[i].vnf_id)];
    if (slot != -1) throw ContractViolation("duplicate vnf_id " + std::to_string(points[i].vnf_id));
    slot = by_pos[i];
  }
  return group_of;
}

// Gives every empty group the point farthest from its own center, taken from a
// group that can spare one.
void repair_empty_groups(std::span<const ProfilePoint> points, std::span<const KpiVector> centers,
                         std::vector<int>& assign) {
  std::vector<std::size_t> sizes(centers.size(), 0);
  for (int g : assign) ++sizes[static_cast<std::size_t>(g)];
  for (std::size_t n = 0; n < centers.size(); ++n) {
    if (sizes[n] > 0) continue;
    std::size_t pick = points.size();
    double pick_d = -1.0;
    for (std::size_t i = 0; i < points.size(); ++i) {
      const auto g = static_cast<std::size_t>(assign[i]);
      if (sizes[g] < 2) continue;
      const double d = squared_distance(points[i].kpis, centers[g]);
      if (d > pick_d) {
        pick_d = d;
        pick = i;
      }
    }
    if (pick == points.size()) throw ContractViolation("ekm: cannot fill empty group");
    --sizes[static_cast<std::size_t>(assign[pick])];
    assign[pick] = static_cast<int>(n);
    ++sizes[n];
  }
}

std::vector<KpiVector> centroids(std::span<const ProfilePoint> points, const std::vector<int>& assign,
                                 std::size_t n_groups, std::size_t dims) {
  std::vector<KpiVector> sums(n_groups, KpiVector(dims));
  std::vector<std::size_t> counts(n_groups, 0);
  for (std::size_t i = 0; i < points.size(); ++i) {
    const auto g = static_cast<std::size_t>(assign[i]);
    sums[g] += points[i].kpis;
    ++counts[g];
  }
  for (std::size_t g = 0; g < n_groups; ++g)
    if (counts[g] > 0) sums[g] *= 1.0 / static_cast<double>(counts[g]);
  return sums;
}

}  // namespace

EkmResult ekm(std::span<const ProfilePoint> points, int n, const GridSchedule& schedule,
              const EkmOptions& options) {
  schedule.validate();
  if (n < 2) throw ContractViolation("ekm: need N >= 2");
  if (points.size() < static_cast<std::size_t>(n)) throw ContractViolation("ekm: fewer points than groups");
  const std::size_t dims = points.front().kpis.size();
  for (const auto& p : points)
    if (p.kpis.size() != dims) throw ContractViolation("ekm: mixed KPI dimensions");

  std::vector<KpiVector> centers = initial_centers(n, dims);
  std::vector<int> assign(points.size(), 0);
  int steps = 0;
  for (std::int64_t t = 0;; ++t) {
    const double delta = schedule.delta(t);
    assign_nearest(points, centers, assign, options.exec);
    repair_empty_groups(points, centers, assign);
    auto next = centroids(points, assign, centers.size(), dims);
    bool moved = false;
    for (std::size_t g = 0; g < next.size(); ++g) {
      next[g] = snap_to_grid(next[g], delta);
      // Compare on the current lattice: the spacing changes every step, so a
      // raw comparison would only settle once everything collapses to 0.
      if (!(next[g] == snap_to_grid(centers[g], delta))) moved = true;
    }
    centers = std::move(next);
    ++steps;
    if (!moved || steps >= options.max_steps) break;
  }
  // Final assignment against the returned centers.
  assign_nearest(points, centers, assign, options.exec);
  repair_empty_groups(points, centers, assign);

  // The schedule coarsens fast, so the loop usually stops on a lattice much
  // wider than the data. Polish on the finest lattice until the partition holds.
  for (int k = 0; options.refine && k < options.max_steps; ++k) {
    auto fine = centroids(points, assign, centers.size(), dims);
    for (auto& c : fine) c = snap_to_grid(c, schedule.delta_min);
    std::vector<int> again(assign.size());
    assign_nearest(points, fine, again, options.exec);
    repair_empty_groups(points, fine, again);
    const bool same = again == assign && fine == centers;
    centers = std::move(fine);
    assign = std::move(again);
    if (same) break;
  }

  EkmResult result;
  result.model.centers = std::move(centers);
  result.model.group_of = dense_assignment(points, assign);
  result.steps = steps;
  return result;
}

double affinity_objective(const AffinityModel& model, std::span<const ProfilePoint> points) {
  double total = 0.0;
  for (const auto& p : points)
    total += euclidean_distance(p.kpis, model.centers[static_cast<std::size_t>(model.group(p.vnf_id))]);
  return total;
}

namespace {

double summed_distance(std::span<const KpiVector> xs, const KpiVector& y) {
  double s = 0.0;
  for (const auto& x : xs) s += euclidean_distance(x, y);
  return s;
}

// Weiszfeld iteration with the Vardi-Zhang step for iterates that land on a
// data point. Returns the better of the result and the plain centroid.
KpiVector geometric_median(std::span<const KpiVector> xs) {
  const std::size_t dims = xs.front().size();
  KpiVector centroid(dims);
  for (const auto& x : xs) centroid += x;
  centroid *= 1.0 / static_cast<double>(xs.size());
  if (xs.size() <= 2) return centroid;  // any point on the segment is optimal

  KpiVector y = centroid;
  for (int it = 0; it < 20000; ++it) {
    KpiVector num(dims);
    KpiVector pull(dims);
    double denom = 0.0;
    int coincident = 0;
    for (const auto& x : xs) {
      const double d = euclidean_distance(x, y);
      if (d < 1e-15) {
        ++coincident;
        continue;
      }
      num += x * (1.0 / d);
      pull += (x - y) * (1.0 / d);
      denom += 1.0 / d;
    }
    if (denom == 0.0) break;
    KpiVector t = num * (1.0 / denom);
    KpiVector next = t;
    if (coincident > 0) {
      const double r = std::sqrt(squared_distance(pull, KpiVector(dims)));
      if (r <= coincident) break;  // y is optimal
      const double w = static_cast<double>(coincident) / r;
      next = t * (1.0 - w) + y * w;
    }
    const double step = euclidean_distance(next, y);
    y = next;
    if (step < 1e-14) break;
  }
  return summed_distance(xs, y) <= summed_distance(xs, centroid) ? y : centroid;
}

}  // namespace

BruteForceAffinity brute_force_affinity(std::span<const ProfilePoint> points, int n) {
  if (points.size() > kBruteForceMaxPoints)
    throw GuardError("brute_force_affinity: at most " + std::to_string(kBruteForceMaxPoints) + " points");
  if (n < 1 || points.size() < static_cast<std::size_t>(n))
    throw ContractViolation("brute_force_affinity: need 1 <= N <= |points|");
  const std::size_t m = points.size();
  const auto groups = static_cast<std::size_t>(n);

  // Restricted growth strings enumerate each set partition exactly once.
  std::vector<int> rgs(m, 0);
  std::vector<int> prefix_max(m, 0);
  std::vector<int> best_assign;
  std::vector<KpiVector> best_centers;
  double best = std::numeric_limits<double>::infinity();
  std::vector<std::vector<KpiVector>> blocks(groups);

  auto evaluate = [&] {
    for (auto& b : blocks) b.clear();
    for (std::size_t i = 0; i < m; ++i) blocks[static_cast<std::size_t>(rgs[i])].push_back(points[i].kpis);
    double obj = 0.0;
    std::vector<KpiVector> centers;
    centers.reserve(groups);
    for (const auto& b : blocks) {
      centers.push_back(geometric_median(b));
      obj += summed_distance(b, centers.back());
      if (obj >= best) return;
    }
    best = obj;
    best_assign = rgs;
    best_centers = std::move(centers);
  };

  // Iterative RGS walk restricted to exactly `groups` blocks.
  auto recurse = [&](auto&& self, std::size_t i, int used) -> void {
    if (i == m) {
      if (used == n) evaluate();
      return;
    }
    const int remaining = static_cast<int>(m - i);
    for (int g = 0; g <= std::min(used, n - 1); ++g) {
      const int used_next = std::max(used, g + 1);
      if (n - used_next > remaining - 1) continue;
      rgs[i] = g;
      self(self, i + 1, used_next);
    }
  };
  recurse(recurse, 0, 0);

  BruteForceAffinity out;
  out.objective = best;
  out.model.centers = std::move(best_centers);
  out.model.group_of = dense_assignment(points, best_assign);
  return out;
}

std::vector<int> detect_deviations(const AffinityModel& model, std::span<const ProfilePoint> snapshot) {
  std::vector<int> out;
  for (const auto& p : snapshot) {
    const int stored = model.group(p.vnf_id);
    if (nearest_center(p.kpis, model.centers) != stored) out.push_back(p.vnf_id);
  }
  return out;
}

std::vector<int> detect_deviations(const AffinityModel& model, std::span<const KpiVector> snapshot,
                                   Exec exec) {
  if (snapshot.size() > model.group_of.size())
    throw ContractViolation("detect_deviations: snapshot has ids outside the model");
  std::vector<int> nearest(snapshot.size(), 0);
  const auto n = static_cast<std::ptrdiff_t>(snapshot.size());
  if (exec == Exec::parallel) {
    ZT_OMP_PARALLEL_FOR_IF(n > 256)
    for (std::ptrdiff_t i = 0; i < n; ++i)
      nearest[static_cast<std::size_t>(i)] = nearest_center(snapshot[static_cast<std::size_t>(i)], model.centers);
  } else {
    for (std::ptrdiff_t i = 0; i < n; ++i)
      nearest[static_cast<std::size_t>(i)] = nearest_center(snapshot[static_cast<std::size_t>(i)], model.centers);
  }
  std::vector<int> out;
  for (std::size_t i = 0; i < snapshot.size(); ++i)
    if (nearest[i] != model.group(static_cast<int>(i))) out.push_back(static_cast<int>(i));
  return out;
}

GroupCountController::GroupCountController(int initial_n, int max_n, int min_n)
    : current_n_(initial_n), min_n_(min_n), max_n_(max_n) {
  if (min_n < 2 || max_n < min_n || initial_n < min_n || initial_n > max_n)
    throw ConfigError("group controller: need 2 <= min_n <= initial_n <= max_n");
}

int GroupCountController::update(bool deviations_occurred) {
  if (deviations_occurred) {
    current_n_ = std::max(min_n_, current_n_ - 1);
    stable_epochs_ = 0;
  } else if (++stable_epochs_ >= 2) {
    current_n_ = std::min(max_n_, current_n_ + 1);
    stable_epochs_ = 0;
  }
  return current_n_;
}

}  // namespace ztorch
