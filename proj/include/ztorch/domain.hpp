#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace ztorch {

/// Caller broke a documented precondition (dimension mismatch, unknown id, ...).
class ContractViolation : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Bad or inconsistent configuration values.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An exact/brute-force routine was asked to solve an instance above its size guard.
class GuardError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// No placement can host a VNF. Carries enough context to replay the failure.
class InfeasibleError : public std::runtime_error {
 public:
  InfeasibleError(const std::string& what, int vnf_id, std::int64_t slot = -1,
                  std::int64_t epoch = -1, std::uint64_t seed = 0)
      : std::runtime_error(what), vnf_id_(vnf_id), slot_(slot), epoch_(epoch), seed_(seed) {}

  int vnf_id() const noexcept { return vnf_id_; }
  std::int64_t slot() const noexcept { return slot_; }
  std::int64_t epoch() const noexcept { return epoch_; }
  std::uint64_t seed() const noexcept { return seed_; }

 private:
  int vnf_id_;
  std::int64_t slot_;
  std::int64_t epoch_;
  std::uint64_t seed_;
};

inline constexpr std::size_t kMaxKpis = 8;
inline constexpr std::size_t kDefaultKpis = 3;

/// Point in the KPI space: per-resource utilization normalized to [0,1]
/// (CPU, memory/storage, network by default). Fixed inline storage so
/// per-slot traces never touch the heap.
class KpiVector {
 public:
  KpiVector() = default;

  explicit KpiVector(std::size_t dims, double fill = 0.0) : size_(checked(dims)) {
    std::fill_n(values_.begin(), size_, fill);
  }

  KpiVector(std::initializer_list<double> values) : size_(checked(values.size())) {
    std::copy(values.begin(), values.end(), values_.begin());
  }

  explicit KpiVector(std::span<const double> values) : size_(checked(values.size())) {
    std::copy(values.begin(), values.end(), values_.begin());
  }

  std::size_t size() const noexcept { return size_; }
  bool empty() const noexcept { return size_ == 0; }

  double operator[](std::size_t z) const noexcept { return values_[z]; }
  double& operator[](std::size_t z) noexcept { return values_[z]; }

  double at(std::size_t z) const {
    if (z >= size_) throw ContractViolation("KpiVector index out of range");
    return values_[z];
  }

  std::span<const double> values() const noexcept { return {values_.data(), size_}; }
  std::span<double> values() noexcept { return {values_.data(), size_}; }

  const double* begin() const noexcept { return values_.data(); }
  const double* end() const noexcept { return values_.data() + size_; }

  /// Clamp every component into [0,1]; NaN maps to 0.
  KpiVector clamped() const noexcept {
    KpiVector out = *this;
    for (std::size_t z = 0; z < size_; ++z) {
      const double v = values_[z];
      out.values_[z] = std::isnan(v) ? 0.0 : std::clamp(v, 0.0, 1.0);
    }
    return out;
  }

  bool is_valid() const noexcept {
    for (std::size_t z = 0; z < size_; ++z) {
      const double v = values_[z];
      if (!std::isfinite(v) || v < 0.0 || v > 1.0) return false;
    }
    return true;
  }

  KpiVector& operator+=(const KpiVector& other) {
    require_same(other);
    for (std::size_t z = 0; z < size_; ++z) values_[z] += other.values_[z];
    return *this;
  }

  KpiVector& operator-=(const KpiVector& other) {
    require_same(other);
    for (std::size_t z = 0; z < size_; ++z) values_[z] -= other.values_[z];
    return *this;
  }

  KpiVector& operator*=(double s) noexcept {
    for (std::size_t z = 0; z < size_; ++z) values_[z] *= s;
    return *this;
  }

  friend KpiVector operator+(KpiVector a, const KpiVector& b) { return a += b; }
  friend KpiVector operator-(KpiVector a, const KpiVector& b) { return a -= b; }
  friend KpiVector operator*(KpiVector a, double s) { return a *= s; }

  friend bool operator==(const KpiVector& a, const KpiVector& b) noexcept {
    if (a.size_ != b.size_) return false;
    for (std::size_t z = 0; z < a.size_; ++z)
      if (a.values_[z] != b.values_[z]) return false;
    return true;
  }

  /// Component-wise a <= b (+tol).
  bool fits_within(const KpiVector& capacity, double tol = 1e-12) const {
    require_same(capacity);
    for (std::size_t z = 0; z < size_; ++z)
      if (values_[z] > capacity.values_[z] + tol) return false;
    return true;
  }

  std::string to_string() const;

 private:
  static std::size_t checked(std::size_t dims) {
    if (dims > kMaxKpis) throw ContractViolation("KpiVector dimension exceeds kMaxKpis");
    return dims;
  }

  void require_same(const KpiVector& other) const {
    if (other.size_ != size_) throw ContractViolation("KpiVector dimension mismatch");
  }

  std::array<double, kMaxKpis> values_{};
  std::size_t size_ = 0;
};

double euclidean_distance(const KpiVector& a, const KpiVector& b);

/// Squared distance; skips the sqrt in nearest-center scans.
double squared_distance(const KpiVector& a, const KpiVector& b);

double l1_norm(const KpiVector& a) noexcept;

/// One monitored VNF profile at one instant.
struct ProfilePoint {
  int vnf_id = 0;
  KpiVector kpis;
};

struct TraceSample {
  std::int64_t slot = 0;
  KpiVector kpis;
};

/// Time series of one VNF's KPIs (a realization of its profile process).
class VnfTrace {
 public:
  VnfTrace() = default;
  explicit VnfTrace(int vnf_id) : vnf_id_(vnf_id) {}

  int vnf_id() const noexcept { return vnf_id_; }
  const std::vector<TraceSample>& samples() const noexcept { return samples_; }
  bool empty() const noexcept { return samples_.empty(); }
  std::size_t size() const noexcept { return samples_.size(); }

  /// Slots must be strictly increasing.
  void append(std::int64_t slot, const KpiVector& kpis);

 private:
  int vnf_id_ = 0;
  std::vector<TraceSample> samples_;
};

/// Affinity groups: N centers of gravity plus the VNF -> group assignment.
/// Assignment is dense over vnf ids; -1 marks an id outside the model.
struct AffinityModel {
  std::vector<KpiVector> centers;
  std::vector<int> group_of;

  std::size_t n_groups() const noexcept { return centers.size(); }
  bool covers(int vnf_id) const noexcept {
    return vnf_id >= 0 && static_cast<std::size_t>(vnf_id) < group_of.size() &&
           group_of[static_cast<std::size_t>(vnf_id)] >= 0;
  }
  int group(int vnf_id) const;
  std::vector<std::size_t> group_sizes() const;

  /// Throws ContractViolation unless N >= 2, every listed VNF sits in exactly one
  /// valid group, and no group is empty.
  void validate() const;
};

struct ComputeNode {
  int node_id = 0;
  KpiVector capacity;
  KpiVector load;

  KpiVector residual() const { return capacity - load; }
};

/// Group -> node (y_{l,n}) and VNF -> node decisions. -1 means unassigned.
struct PlacementMap {
  std::vector<int> group_to_node;
  std::vector<int> vnf_to_node;

  bool empty() const noexcept;
  std::size_t placed_count() const noexcept;
};

/// Surveillance-epoch controller state.
struct EpochState {
  std::int64_t epoch_index = 0;
  std::int64_t omega = 500;
  int interval_index = 3;
  std::int64_t deviations_last_epoch = 0;
  std::vector<std::vector<double>> q_table;       // [state bucket][action]
  std::vector<std::vector<std::int64_t>> visit_counts;
};

}  // namespace ztorch
