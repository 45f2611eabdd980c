#include "lde/verify.hpp"

#include <cmath>
#include <numeric>

#include "lde/bounds.hpp"
#include "lde/comparison.hpp"
#include "lde/error.hpp"
#include "lde/estimators.hpp"
#include "lde/value.hpp"

namespace lde {
namespace {

Policy random_softmax(std::size_t rows, std::size_t cols, double scale, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::MatrixXd probs(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (Eigen::Index s = 0; s < probs.rows(); ++s) {
    for (Eigen::Index a = 0; a < probs.cols(); ++a) probs(s, a) = scale * normal(rng);
    probs.row(s).array() -= probs.row(s).maxCoeff();
    probs.row(s) = probs.row(s).array().exp().matrix();
    probs.row(s) /= probs.row(s).sum();
  }
  return Policy(std::move(probs));
}

struct Cell {
  std::size_t pair;
  std::size_t m;
};

}  // namespace

std::string_view to_string(BoundKind kind) noexcept {
  switch (kind) {
    case BoundKind::kComparison: return "comparison";
    case BoundKind::kComparisonProofForm: return "comparison_proof_form";
    case BoundKind::kPerState: return "per_state";
  }
  return "?";
}

std::vector<std::size_t> sample_action_subset(std::size_t n, std::size_t m, Rng& rng) {
  if (m > n) throw Error(ErrorCode::kInvalidArgument, "subset larger than the action set");
  std::vector<std::size_t> actions(n);
  std::iota(actions.begin(), actions.end(), std::size_t{0});
  // Partial Fisher-Yates.
  for (std::size_t i = 0; i < m; ++i) {
    std::uniform_int_distribution<std::size_t> pick(i, n - 1);
    std::swap(actions[i], actions[pick(rng)]);
  }
  actions.resize(m);
  return actions;
}

EnvTable random_bound_env(std::size_t n_states, std::size_t n_actions, Rng& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  Eigen::MatrixXd rewards(static_cast<Eigen::Index>(n_states),
                          static_cast<Eigen::Index>(n_actions));
  for (Eigen::Index s = 0; s < rewards.rows(); ++s) {
    for (Eigen::Index a = 0; a < rewards.cols(); ++a) rewards(s, a) = unit(rng);
  }
  return EnvTable::from_rewards(std::move(rewards));
}

std::vector<BoundCheckRow> verify_bounds(const BoundCheckConfig& config) {
  if (config.resamples < 2) {
    throw Error(ErrorCode::kInvalidArgument, "need at least two resamples");
  }
  for (std::size_t m : config.ms) {
    if (m < 1 || m > config.n_actions) {
      throw Error(ErrorCode::kInvalidArgument, "m must lie in [1, n_actions]");
    }
  }

  Rng env_rng = stream_rng(config.seed, {0});
  const EnvTable env = random_bound_env(config.n_states, config.n_actions, env_rng);
  const Baseline baseline = Baseline::constant(env.rewards().mean());

  std::vector<Policy> pis;
  std::vector<Policy> mus;
  for (std::size_t p = 0; p < config.pairs; ++p) {
    Rng rng = stream_rng(config.seed, {1, p});
    std::uniform_real_distribution<double> scale(0.25, 3.0);
    pis.push_back(random_softmax(config.n_states, config.n_actions, scale(rng), rng));
    mus.push_back(random_softmax(config.n_states, config.n_actions, scale(rng), rng));
  }

  std::vector<Cell> cells;
  for (std::size_t p = 0; p < config.pairs; ++p) {
    for (std::size_t m : config.ms) cells.push_back({p, m});
  }

  std::vector<std::vector<BoundCheckRow>> per_cell(cells.size());
  parallel_for(cells.size(), config.jobs, [&](std::size_t c) {
    const auto [p, m] = cells[c];
    const Policy& pi = pis[p];
    const Policy& mu = mus[p];
    const BoundReport bounds(env, pi, mu, baseline, m);
    const double gap = bounds.value_gap();
    Rng rng = stream_rng(config.seed, {2, p, m});

    const double p_n = static_cast<double>(m) / static_cast<double>(config.n_actions);
    std::size_t correct = 0;
    std::vector<std::size_t> mispredicted(config.n_states * config.deltas.size(), 0);
    std::vector<HistoricalRecord> records;
    for (std::size_t r = 0; r < config.resamples; ++r) {
      records.clear();
      for (std::size_t s = 0; s < config.n_states; ++s) {
        for (std::size_t a : sample_action_subset(config.n_actions, m, rng)) {
          records.push_back({s, a, env.reward(s, a), p_n});
        }
      }
      const Dataset data(records, DedupMode::kKeepAll);
      const double diff = lde(data, pi, config.n_actions, baseline) -
                          lde(data, mu, config.n_actions, baseline);
      if (diff != 0.0 && (diff > 0.0) == (gap > 0.0)) ++correct;
      for (std::size_t s = 0; s < config.n_states; ++s) {
        const double product = per_state_product(env, pi, mu, data, baseline, s);
        for (std::size_t d = 0; d < config.deltas.size(); ++d) {
          if (product <= -config.deltas[d]) ++mispredicted[s * config.deltas.size() + d];
        }
      }
    }

    const double total = static_cast<double>(config.resamples);
    auto frequency_row = [&](BoundKind kind, double bound, std::size_t hits) {
      BoundCheckRow row;
      row.pair = p;
      row.m = m;
      row.kind = kind;
      row.radius = bounds.radius();
      row.bound = bound;
      row.observed = static_cast<double>(hits) / total;
      row.standard_error = std::sqrt(row.observed * (1.0 - row.observed) / total);
      return row;
    };

    auto& rows = per_cell[c];
    for (BoundKind kind : {BoundKind::kComparison, BoundKind::kComparisonProofForm}) {
      const double bound = kind == BoundKind::kComparison
                               ? bounds.p_comp_lower()
                               : bounds.p_comp_lower_proof_form();
      BoundCheckRow row = frequency_row(kind, bound, correct);
      row.gap = gap;
      row.violated = row.observed < row.bound - 3.0 * row.standard_error;
      rows.push_back(row);
    }
    for (std::size_t s = 0; s < config.n_states; ++s) {
      for (std::size_t d = 0; d < config.deltas.size(); ++d) {
        const double delta = config.deltas[d];
        BoundCheckRow row = frequency_row(BoundKind::kPerState,
                                          bounds.per_state_upper(delta, s),
                                          mispredicted[s * config.deltas.size() + d]);
        row.state = s;
        row.delta = delta;
        row.gap = state_value(env, pi, s) - state_value(env, mu, s);
        row.radius = state_bound_radius(env, baseline, s);
        row.violated = row.observed > row.bound + 3.0 * row.standard_error;
        rows.push_back(row);
      }
    }
  });

  std::vector<BoundCheckRow> out;
  for (auto& rows : per_cell) out.insert(out.end(), rows.begin(), rows.end());
  return out;
}

}  // namespace lde
