#include "ztorch/epoch_control.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "ztorch/csv.hpp"

namespace ztorch {

void QLearningConfig::validate(std::int64_t smallest_interval) const {
  if (!(psi > 0.0 && psi <= 1.0)) throw ConfigError("qlearning.psi must be in (0,1]");
  if (!(phi >= 0.0 && phi <= 1.0)) throw ConfigError("qlearning.phi must be in [0,1]");
  if (!(phi_decay > 0.0 && phi_decay <= 1.0)) throw ConfigError("qlearning.phi_decay must be in (0,1]");
  if (!(beta <= 1.0)) throw ConfigError("qlearning.beta must be <= 1");
  if (step < 1) throw ConfigError("qlearning.step must be >= 1");
  if (action_multipliers.empty()) throw ConfigError("qlearning.actions must not be empty");
  if (omega_min < smallest_interval) throw ConfigError("qlearning.omega_min must be >= the smallest interval");
  if (omega_max < omega_min) throw ConfigError("qlearning.omega_max must be >= omega_min");
  for (std::size_t b = 0; b < state_bounds.size(); ++b)
    if (state_bounds[b] < 1 || (b > 0 && state_bounds[b] <= state_bounds[b - 1]))
      throw ConfigError("qlearning.state_bounds must be positive and increasing");
}

double reward(std::int64_t omega, std::int64_t j, double beta) {
  if (omega <= 0 || j < 0) throw ContractViolation("reward: need omega > 0 and j >= 0");
  return static_cast<double>(omega) / std::pow(static_cast<double>(j + 1), beta);
}

int state_bucket(std::int64_t j, std::span<const std::int64_t> bounds) {
  int b = 0;
  while (static_cast<std::size_t>(b) < bounds.size() && j >= bounds[static_cast<std::size_t>(b)]) ++b;
  return b;
}

double q_update(int state, int action, double r, int next_state, std::vector<std::vector<double>>& q_table,
                std::vector<std::vector<std::int64_t>>& visit_counts, double psi) {
  auto& q = q_table.at(static_cast<std::size_t>(state)).at(static_cast<std::size_t>(action));
  auto& i = visit_counts.at(static_cast<std::size_t>(state)).at(static_cast<std::size_t>(action));
  ++i;
  const double alpha = 0.5 / static_cast<double>(i);
  const auto& next = q_table.at(static_cast<std::size_t>(next_state));
  const double q_max = *std::max_element(next.begin(), next.end());
  q = (1.0 - alpha) * q + alpha * (r + psi * q_max);
  return q;
}

int select_action(int state, const std::vector<std::vector<double>>& q_table, double phi, Rng& rng) {
  const auto& row = q_table.at(static_cast<std::size_t>(state));
  if (row.empty()) throw ContractViolation("select_action: empty action set");
  const double u = rng.uniform();
  if (u < phi) return static_cast<int>(rng.uniform_index(row.size()));
  return static_cast<int>(std::max_element(row.begin(), row.end()) - row.begin());
}

std::int64_t apply_action(std::int64_t omega, int action, const QLearningConfig& cfg) {
  const auto k = cfg.action_multipliers.at(static_cast<std::size_t>(action));
  return std::clamp(omega + k * cfg.step, cfg.omega_min, cfg.omega_max);
}

EpochController::EpochController(QLearningConfig cfg, std::uint64_t seed)
    : cfg_(std::move(cfg)), rng_(seed, stream::learner), phi_(cfg_.phi) {
  cfg_.validate();
  state_.q_table.assign(cfg_.n_states(), std::vector<double>(cfg_.n_actions(), 0.0));
  state_.visit_counts.assign(cfg_.n_states(), std::vector<std::int64_t>(cfg_.n_actions(), 0));
  state_.omega = std::clamp(state_.omega, cfg_.omega_min, cfg_.omega_max);
}

std::int64_t EpochController::close_epoch(std::int64_t elapsed, std::int64_t j) {
  const int s = state_bucket(j, cfg_.state_bounds);
  if (last_action_ >= 0)
    q_update(last_state_, last_action_, reward(std::max<std::int64_t>(1, elapsed), j, cfg_.beta), s,
             state_.q_table, state_.visit_counts, cfg_.psi);
  const int a = select_action(s, state_.q_table, phi_, rng_);
  phi_ *= cfg_.phi_decay;
  last_state_ = s;
  last_action_ = a;
  state_.deviations_last_epoch = j;
  ++state_.epoch_index;
  state_.omega = apply_action(state_.omega, a, cfg_);
  return state_.omega;
}

void EpochController::write_q_csv(std::ostream& os) const {
  os << csv::schema_line(kQTableSchema) << '\n' << "state_bucket,action_k,q_value,visits\n";
  for (std::size_t s = 0; s < state_.q_table.size(); ++s)
    for (std::size_t a = 0; a < state_.q_table[s].size(); ++a)
      os << s << ',' << cfg_.action_multipliers[a] << ',' << csv::format_double(state_.q_table[s][a]) << ','
         << state_.visit_counts[s][a] << '\n';
}

int update_monitoring_interval(int index, bool deviations_occurred, bool rebind_performed, int n_intervals,
                               int default_index) {
  if (index < 1 || index > n_intervals) throw ContractViolation("monitoring interval index out of range");
  if (rebind_performed) return default_index;
  if (deviations_occurred) return std::max(1, index - 1);
  return std::min(n_intervals, index + 1);
}

}  // namespace ztorch
