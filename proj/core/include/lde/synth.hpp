#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "lde/env.hpp"
#include "lde/estimators.hpp"
#include "lde/experiment.hpp"
#include "lde/random.hpp"

namespace lde {

// Reward surfaces over states in [0, 1] and actions in [-1, 1].
enum class RewardKind { kEx11, kEx12 };

std::string_view to_string(RewardKind kind) noexcept;
std::optional<RewardKind> parse_reward_kind(std::string_view name) noexcept;

// (exp(s+a) + sin(2 pi (s-a))) * (cos(2 pi (s+a)) + exp(s-a))
double reward_ex11(double s, double a);
// (3 + cos(2 pi (s+a)) + cos(10 pi (s-a))) / 2 * exp(-(a + cos(2 pi s))^2)
double reward_ex12(double s, double a);

// Uniform lattices including both endpoints.
EnvTable build_env(RewardKind kind, std::size_t n_states = 100,
                   std::size_t n_actions = 100);

// Each row is the softmax of i.i.d. standard normal logits.
Policy sample_softmax_policy(std::size_t n_states, std::size_t n_actions, Rng& rng);

// Moves pi0 towards the greedy optimal or pessimal policy and mu0 likewise so
// that V(pi) - V(mu) = alpha (V_max - V_min). The pair is centred on the
// midpoint of the input values, clamped so both targets stay reachable.
std::pair<Policy, Policy> adjust_pair_to_alpha(const EnvTable& env, const Policy& pi0,
                                               const Policy& mu0, double alpha);

// m i.i.d. actions per state from the behavior row, keep-all semantics.
Dataset sample_history(const EnvTable& env, const Policy& behavior, std::size_t m,
                       Rng& rng);

struct SweepConfig {
  RewardKind kind = RewardKind::kEx11;
  std::size_t n_states = 100;
  std::size_t n_actions = 100;
  std::vector<double> alphas = {0.05, 0.10, 0.15, 0.20, 0.25};
  std::vector<std::size_t> ms = {1};
  std::size_t tests = 1000;  // per (alpha, m) cell
  std::vector<NamedEstimator> estimators = make_estimators(all_estimators());
  // Coin-flip which member of the alpha-pair is reported as policy 0.
  bool randomize_orientation = true;
  std::uint64_t seed = 0;
  unsigned jobs = 1;
};

// Runs tests x |alphas| x |ms| independent tests. Test t of cell (i, j) draws
// from stream_rng(seed, {i, j, t}), so the output does not depend on jobs.
ExperimentResult run_sweep(const SweepConfig& config);

}  // namespace lde
