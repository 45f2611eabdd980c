#include "lde/env.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>
#include <utility>

#include "lde/error.hpp"

namespace lde {
namespace {

constexpr double kDistributionTolerance = 1e-12;
constexpr double kRowTolerance = 1e-9;

std::vector<double> index_grid(Eigen::Index n) {
  std::vector<double> grid(static_cast<std::size_t>(n));
  for (std::size_t i = 0; i < grid.size(); ++i) grid[i] = static_cast<double>(i);
  return grid;
}

}  // namespace

EnvTable::EnvTable(std::vector<double> state_coords,
                   std::vector<double> action_coords, Eigen::MatrixXd rewards,
                   std::optional<Eigen::VectorXd> state_distribution)
    : state_coords_(std::move(state_coords)),
      action_coords_(std::move(action_coords)),
      rewards_(std::move(rewards)) {
  if (state_coords_.empty()) {
    throw Error(ErrorCode::kDimension, "environment needs at least one state");
  }
  if (action_coords_.size() < 2) {
    throw Error(ErrorCode::kDimension, "environment needs at least two actions");
  }
  if (static_cast<std::size_t>(rewards_.rows()) != state_coords_.size() ||
      static_cast<std::size_t>(rewards_.cols()) != action_coords_.size()) {
    std::ostringstream msg;
    msg << "reward table is " << rewards_.rows() << "x" << rewards_.cols()
        << ", grid is " << state_coords_.size() << "x" << action_coords_.size();
    throw Error(ErrorCode::kDimension, msg.str());
  }
  if (!rewards_.allFinite()) {
    throw Error(ErrorCode::kInvalidArgument, "reward table contains NaN or Inf");
  }

  const auto n = static_cast<Eigen::Index>(state_coords_.size());
  if (state_distribution) {
    state_distribution_ = std::move(*state_distribution);
    if (state_distribution_.size() != n) {
      throw Error(ErrorCode::kDimension, "state distribution length mismatch");
    }
    if (!state_distribution_.allFinite() || state_distribution_.minCoeff() < 0.0 ||
        std::abs(state_distribution_.sum() - 1.0) > kDistributionTolerance) {
      throw Error(ErrorCode::kInvalidArgument,
                  "state distribution must be nonnegative and sum to 1");
    }
  } else {
    state_distribution_ = Eigen::VectorXd::Constant(n, 1.0 / static_cast<double>(n));
  }
}

EnvTable EnvTable::from_rewards(Eigen::MatrixXd rewards,
                                std::optional<Eigen::VectorXd> state_distribution) {
  auto states = index_grid(rewards.rows());
  auto actions = index_grid(rewards.cols());
  return EnvTable(std::move(states), std::move(actions), std::move(rewards),
                  std::move(state_distribution));
}

Policy::Policy(Eigen::MatrixXd probs) : probs_(std::move(probs)) {
  if (probs_.rows() < 1 || probs_.cols() < 1) {
    throw Error(ErrorCode::kDimension, "policy table is empty");
  }
  if (!probs_.allFinite() || probs_.minCoeff() < 0.0 || probs_.maxCoeff() > 1.0) {
    throw Error(ErrorCode::kInvalidArgument, "policy entries must lie in [0, 1]");
  }
  for (Eigen::Index s = 0; s < probs_.rows(); ++s) {
    const double total = probs_.row(s).sum();
    if (std::abs(total - 1.0) > kRowTolerance) {
      std::ostringstream msg;
      msg << "policy row " << s << " sums to " << total;
      throw Error(ErrorCode::kInvalidArgument, msg.str());
    }
  }
}

Policy Policy::uniform(std::size_t n_states, std::size_t n_actions) {
  if (n_actions == 0) throw Error(ErrorCode::kDimension, "no actions");
  return Policy(Eigen::MatrixXd::Constant(static_cast<Eigen::Index>(n_states),
                                          static_cast<Eigen::Index>(n_actions),
                                          1.0 / static_cast<double>(n_actions)));
}

Policy Policy::deterministic(std::span<const std::size_t> actions,
                             std::size_t n_actions) {
  Eigen::MatrixXd probs = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(actions.size()),
                                                static_cast<Eigen::Index>(n_actions));
  for (std::size_t s = 0; s < actions.size(); ++s) {
    if (actions[s] >= n_actions) {
      throw Error(ErrorCode::kDimension, "deterministic action out of range");
    }
    probs(static_cast<Eigen::Index>(s), static_cast<Eigen::Index>(actions[s])) = 1.0;
  }
  return Policy(std::move(probs));
}

Policy Policy::mix(const Policy& a, const Policy& b, double t) {
  if (a.probs_.rows() != b.probs_.rows() || a.probs_.cols() != b.probs_.cols()) {
    throw Error(ErrorCode::kDimension, "cannot mix policies of different shapes");
  }
  if (!(t >= 0.0 && t <= 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "mixing weight must lie in [0, 1]");
  }
  Eigen::MatrixXd mixed = t * a.probs_ + (1.0 - t) * b.probs_;
  // Rounding can push an entry a hair outside [0, 1].
  mixed = mixed.cwiseMax(0.0).cwiseMin(1.0);
  return Policy(std::move(mixed));
}

Dataset::Dataset(std::vector<HistoricalRecord> records, DedupMode mode)
    : mode_(mode) {
  for (const auto& r : records) {
    if (!std::isfinite(r.reward)) {
      throw Error(ErrorCode::kInvalidArgument, "record reward is not finite");
    }
    if (!(r.behavior_prob > 0.0 && r.behavior_prob <= 1.0)) {
      throw Error(ErrorCode::kInvalidArgument,
                  "record behavior probability must lie in (0, 1]");
    }
  }
  if (mode_ == DedupMode::kKeepAll) {
    records_ = std::move(records);
    return;
  }
  std::map<std::pair<std::size_t, std::size_t>, std::size_t> last;
  for (std::size_t i = 0; i < records.size(); ++i) {
    last[{records[i].state, records[i].action}] = i;
  }
  records_.reserve(last.size());
  for (std::size_t i = 0; i < records.size(); ++i) {
    if (last.at({records[i].state, records[i].action}) == i) {
      records_.push_back(records[i]);
    }
  }
}

std::size_t Dataset::count_at(std::size_t s) const {
  return static_cast<std::size_t>(std::count_if(
      records_.begin(), records_.end(),
      [s](const HistoricalRecord& r) { return r.state == s; }));
}

std::size_t Dataset::max_state() const {
  std::size_t m = 0;
  for (const auto& r : records_) m = std::max(m, r.state);
  return m;
}

std::size_t Dataset::max_action() const {
  std::size_t m = 0;
  for (const auto& r : records_) m = std::max(m, r.action);
  return m;
}

void check_conforms(const EnvTable& env, const Policy& pi) {
  if (pi.n_states() != env.n_states() || pi.n_actions() != env.n_actions()) {
    std::ostringstream msg;
    msg << "policy is " << pi.n_states() << "x" << pi.n_actions()
        << ", environment is " << env.n_states() << "x" << env.n_actions();
    throw Error(ErrorCode::kDimension, msg.str());
  }
}

}  // namespace lde
