#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace lde {

// Finite contextual bandit: ordered state and action grids, a deterministic
// reward table and a distribution over states (uniform unless given).
class EnvTable {
 public:
  EnvTable(std::vector<double> state_coords, std::vector<double> action_coords,
           Eigen::MatrixXd rewards,
           std::optional<Eigen::VectorXd> state_distribution = std::nullopt);

  // Grid coordinates default to the row/column indices.
  static EnvTable from_rewards(
      Eigen::MatrixXd rewards,
      std::optional<Eigen::VectorXd> state_distribution = std::nullopt);

  std::size_t n_states() const noexcept { return state_coords_.size(); }
  std::size_t n_actions() const noexcept { return action_coords_.size(); }

  const std::vector<double>& state_coords() const noexcept { return state_coords_; }
  const std::vector<double>& action_coords() const noexcept { return action_coords_; }
  const Eigen::MatrixXd& rewards() const noexcept { return rewards_; }
  const Eigen::VectorXd& state_distribution() const noexcept { return state_distribution_; }

  double reward(std::size_t s, std::size_t a) const { return rewards_(s, a); }
  double reward_min() const { return rewards_.minCoeff(); }
  double reward_max() const { return rewards_.maxCoeff(); }

 private:
  std::vector<double> state_coords_;
  std::vector<double> action_coords_;
  Eigen::MatrixXd rewards_;
  Eigen::VectorXd state_distribution_;
};

// Row-stochastic state -> action probability table.
class Policy {
 public:
  explicit Policy(Eigen::MatrixXd probs);

  static Policy uniform(std::size_t n_states, std::size_t n_actions);
  static Policy deterministic(std::span<const std::size_t> actions,
                              std::size_t n_actions);
  // Entrywise t * a + (1 - t) * b for t in [0, 1].
  static Policy mix(const Policy& a, const Policy& b, double t);

  std::size_t n_states() const noexcept { return static_cast<std::size_t>(probs_.rows()); }
  std::size_t n_actions() const noexcept { return static_cast<std::size_t>(probs_.cols()); }
  double prob(std::size_t s, std::size_t a) const { return probs_(s, a); }
  const Eigen::MatrixXd& probs() const noexcept { return probs_; }

 private:
  Eigen::MatrixXd probs_;
};

struct HistoricalRecord {
  std::size_t state = 0;
  std::size_t action = 0;
  double reward = 0.0;
  double behavior_prob = 1.0;

  friend bool operator==(const HistoricalRecord&, const HistoricalRecord&) = default;
};

enum class DedupMode {
  kKeepAll,     // multiset: repeated (state, action) pairs are all kept
  kLatestWins,  // a repeated pair overwrites the earlier observation
};

// Ordered collection of logged interactions. In latest-wins mode only the
// final record per (state, action) survives, positioned where it was logged.
class Dataset {
 public:
  explicit Dataset(std::vector<HistoricalRecord> records,
                   DedupMode mode = DedupMode::kLatestWins);

  const std::vector<HistoricalRecord>& records() const noexcept { return records_; }
  std::size_t size() const noexcept { return records_.size(); }
  bool empty() const noexcept { return records_.empty(); }
  DedupMode mode() const noexcept { return mode_; }

  // Number of records logged at state s.
  std::size_t count_at(std::size_t s) const;
  std::size_t max_state() const;
  std::size_t max_action() const;

 private:
  std::vector<HistoricalRecord> records_;
  DedupMode mode_;
};

// Throws kDimension unless the policy has the env's shape.
void check_conforms(const EnvTable& env, const Policy& pi);

}  // namespace lde
