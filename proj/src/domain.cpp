#include "ztorch/domain.hpp"

#include <sstream>

namespace ztorch {

std::string KpiVector::to_string() const {
  std::ostringstream os;
  os << '(';
  for (std::size_t z = 0; z < size_; ++z) {
    if (z) os << ", ";
    os << values_[z];
  }
  os << ')';
  return os.str();
}

double squared_distance(const KpiVector& a, const KpiVector& b) {
  if (a.size() != b.size()) throw ContractViolation("euclidean_distance: dimension mismatch");
  double acc = 0.0;
  for (std::size_t z = 0; z < a.size(); ++z) {
    const double d = a[z] - b[z];
    acc += d * d;
  }
  return acc;
}

double euclidean_distance(const KpiVector& a, const KpiVector& b) {
  return std::sqrt(squared_distance(a, b));
}

double l1_norm(const KpiVector& a) noexcept {
  double acc = 0.0;
  for (double v : a) acc += std::abs(v);
  return acc;
}

void VnfTrace::append(std::int64_t slot, const KpiVector& kpis) {
  if (!samples_.empty() && slot <= samples_.back().slot)
    throw ContractViolation("VnfTrace: slots must be strictly increasing");
  if (!samples_.empty() && kpis.size() != samples_.front().kpis.size())
    throw ContractViolation("VnfTrace: KPI dimension changed mid-trace");
  samples_.push_back({slot, kpis});
}

int AffinityModel::group(int vnf_id) const {
  if (!covers(vnf_id))
    throw ContractViolation("AffinityModel: unknown vnf_id " + std::to_string(vnf_id));
  return group_of[static_cast<std::size_t>(vnf_id)];
}

std::vector<std::size_t> AffinityModel::group_sizes() const {
  std::vector<std::size_t> sizes(centers.size(), 0);
  for (int g : group_of)
    if (g >= 0 && static_cast<std::size_t>(g) < sizes.size()) ++sizes[static_cast<std::size_t>(g)];
  return sizes;
}

void AffinityModel::validate() const {
  if (centers.size() < 2) throw ContractViolation("AffinityModel: need at least 2 groups");
  const std::size_t dims = centers.front().size();
  for (const auto& c : centers)
    if (c.size() != dims) throw ContractViolation("AffinityModel: mixed center dimensions");
  for (int g : group_of)
    if (g < -1 || g >= static_cast<int>(centers.size()))
      throw ContractViolation("AffinityModel: group index out of range");
  for (std::size_t n = 0; const auto s : group_sizes()) {
    if (s == 0) throw ContractViolation("AffinityModel: group " + std::to_string(n) + " is empty");
    ++n;
  }
}

bool PlacementMap::empty() const noexcept { return placed_count() == 0; }

std::size_t PlacementMap::placed_count() const noexcept {
  return static_cast<std::size_t>(
      std::count_if(vnf_to_node.begin(), vnf_to_node.end(), [](int l) { return l >= 0; }));
}

}  // namespace ztorch
