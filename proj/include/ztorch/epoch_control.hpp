#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "ztorch/domain.hpp"
#include "ztorch/rng.hpp"

namespace ztorch {

struct QLearningConfig {
  double beta = 0.5;
  double psi = 0.9;
  double phi = 0.5;
  double phi_decay = 1.0;  // multiplied into phi after every selection; 1 keeps it constant
  std::int64_t step = 50;  // o
  std::vector<int> action_multipliers{-2, -1, 0, 1, 2};
  // Bucket b holds j < state_bounds[b]; the last bucket is open-ended.
  // Default buckets: {0}, {1,2}, {3..9}, {10+}.
  std::vector<std::int64_t> state_bounds{1, 3, 10};
  std::int64_t omega_min = 100;
  std::int64_t omega_max = 2000;

  std::size_t n_states() const noexcept { return state_bounds.size() + 1; }
  std::size_t n_actions() const noexcept { return action_multipliers.size(); }
  void validate(std::int64_t smallest_interval = 1) const;
};

/// omega / (j+1)^beta.
double reward(std::int64_t omega, std::int64_t j, double beta);

int state_bucket(std::int64_t j, std::span<const std::int64_t> bounds);

/// One tabular update, alpha = 0.5 / i(s,a) with the visit counted first.
/// Tables are [state][action], zero-initialized. Returns the new Q(s,a).
double q_update(int state, int action, double r, int next_state, std::vector<std::vector<double>>& q_table,
                std::vector<std::vector<std::int64_t>>& visit_counts, double psi);

/// Epsilon-greedy: with probability phi a uniform action, else the arg-max
/// (lowest multiplier index wins ties). Returns an action index.
int select_action(int state, const std::vector<std::vector<double>>& q_table, double phi, Rng& rng);

/// omega + k*o, clamped to the configured bounds.
std::int64_t apply_action(std::int64_t omega, int action, const QLearningConfig& cfg);

/// Owns the Q-table and the learner's random stream for one run.
class EpochController {
 public:
  EpochController(QLearningConfig cfg, std::uint64_t seed);

  const QLearningConfig& config() const noexcept { return cfg_; }
  const EpochState& state() const noexcept { return state_; }
  EpochState& state() noexcept { return state_; }
  double phi() const noexcept { return phi_; }

  /// Closes an epoch of length `elapsed` with j deviations: rewards the action
  /// that opened it (if any), picks the next one and returns the next omega.
  std::int64_t close_epoch(std::int64_t elapsed, std::int64_t j);

  void write_q_csv(std::ostream& os) const;

 private:
  QLearningConfig cfg_;
  EpochState state_;
  Rng rng_;
  double phi_;
  int last_state_ = -1;
  int last_action_ = -1;
};

inline constexpr const char* kQTableSchema = "ztorch.qtable/1";

/// Monitoring intervals (slots between sample points), coarsest last.
inline const std::vector<std::int64_t>& default_monitoring_intervals() {
  static const std::vector<std::int64_t> v{2, 5, 10, 20, 50};
  return v;
}
inline constexpr int kDefaultIntervalIndex = 3;  // 1-based: interval 10

/// Rebind restores the default; deviations sample faster; a quiet epoch
/// samples slower. Indices are 1-based.
int update_monitoring_interval(int index, bool deviations_occurred, bool rebind_performed,
                               int n_intervals = 5, int default_index = kDefaultIntervalIndex);

}  // namespace ztorch
