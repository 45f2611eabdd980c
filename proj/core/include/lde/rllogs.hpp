#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "lde/comparison.hpp"
#include "lde/env.hpp"
#include "lde/estimators.hpp"
#include "lde/experiment.hpp"

namespace lde {

inline constexpr std::size_t kMaxHorizon = 100;

struct EpisodeLog {
  std::string episode_id;
  std::string generator;
  Eigen::MatrixXd behavior_actions;                  // horizon x d
  Eigen::VectorXd rewards;                           // horizon
  std::map<std::string, Eigen::MatrixXd> candidates;  // each horizon x d
  Eigen::VectorXd action_low;
  Eigen::VectorXd action_high;

  std::size_t horizon() const noexcept { return static_cast<std::size_t>(rewards.size()); }
  std::size_t action_dim() const noexcept {
    return static_cast<std::size_t>(behavior_actions.cols());
  }
};

// One JSON object per non-blank line. Episodes longer than kMaxHorizon are
// truncated.
std::vector<EpisodeLog> parse_episode_logs(const std::string& text);
std::vector<EpisodeLog> parse_episode_log(const std::filesystem::path& path);
std::string episode_to_json_line(const EpisodeLog& log);

// Product over steps of the coordinate mean of exp(1 - 1/(1 - z^2)), with
// z = (policy - behavior) / (high - low) and a factor of 0 once |z| >= 1.
double probability_proxy(const Eigen::MatrixXd& policy_actions,
                         const Eigen::MatrixXd& behavior_actions,
                         const Eigen::VectorXd& low, const Eigen::VectorXd& high);

struct RlDataset {
  Dataset data;                      // record n is episode n, action 0
  std::vector<std::string> policies;  // column order of `proxies`
  Eigen::MatrixXd proxies;           // N x K, pi_k(a_n | s_n)
};

// Reward is the episode return, p_n the generator's proxy on its own
// trajectory. Policies are the candidate names of the first episode.
RlDataset episodes_to_dataset(const std::vector<EpisodeLog>& logs);

// Estimates for every policy column. The baseline is the constant mean return.
std::vector<double> rl_estimates(const RlDataset& rl, Estimator method);

std::vector<ComparisonReport> run_rl_comparison(const std::vector<EpisodeLog>& logs,
                                                const std::map<std::string, double>& true_values,
                                                const std::vector<Estimator>& methods);

struct LogSet {
  std::string name;
  std::vector<EpisodeLog> logs;
  std::map<std::string, double> true_values;
};

// Within each set, test j holds the j-th episode generated by each policy;
// the number of tests is the smallest per-policy episode count.
ExperimentResult run_rllogs(const std::vector<LogSet>& sets, const std::vector<Estimator>& methods);

struct GenLogsConfig {
  std::size_t sets = 15;
  std::size_t policies = 5;
  std::size_t episodes = 15;  // per policy and set
  std::size_t horizon = kMaxHorizon;
  std::size_t state_dim = 3;
  std::size_t action_dim = 2;
  std::size_t value_rollouts = 400;  // Monte Carlo episodes behind each true value
  std::uint64_t seed = 0;
  unsigned jobs = 1;
};

// Noisy linear dynamics x' = A x + B a + w with deterministic clipped linear
// feedback policies a = clip(K x). Each logged episode records every
// candidate's action at the visited states.
std::vector<LogSet> generate_log_sets(const GenLogsConfig& config);

}  // namespace lde
