#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "lde/env.hpp"
#include "lde/random.hpp"

namespace lde {

// Monte Carlo check of the comparison and per-state misprediction bounds.
// Historical action sets are uniform m-subsets per state with p_n = m/n, the
// baseline is the constant mean of the reward table.
struct BoundCheckConfig {
  std::size_t n_states = 4;
  std::size_t n_actions = 3;
  std::size_t pairs = 10;
  std::vector<std::size_t> ms = {1, 2, 3};
  std::vector<double> deltas = {0.01, 0.1, 0.5};
  std::size_t resamples = 10000;
  std::uint64_t seed = 0;
  unsigned jobs = 1;
};

enum class BoundKind {
  kComparison,           // printed form, lower bound on P[correct]
  kComparisonProofForm,  // Hoeffding form, lower bound on P[correct]
  kPerState,             // upper bound on P[product <= -delta]
};

std::string_view to_string(BoundKind kind) noexcept;

struct BoundCheckRow {
  std::size_t pair = 0;
  std::size_t m = 0;
  BoundKind kind = BoundKind::kComparison;
  std::optional<std::size_t> state;
  std::optional<double> delta;
  double gap = 0.0;       // V(pi) - V(mu), or the per-state gap
  double radius = 0.0;
  double bound = 0.0;
  double observed = 0.0;  // Monte Carlo frequency
  double standard_error = 0.0;
  // More than three standard errors on the wrong side of the bound.
  bool violated = false;
};

// Draws a uniform m-subset of {0, ..., n-1}.
std::vector<std::size_t> sample_action_subset(std::size_t n, std::size_t m, Rng& rng);

// Environment used by verify_bounds: rewards i.i.d. uniform on [0, 1].
EnvTable random_bound_env(std::size_t n_states, std::size_t n_actions, Rng& rng);

std::vector<BoundCheckRow> verify_bounds(const BoundCheckConfig& config);

}  // namespace lde
