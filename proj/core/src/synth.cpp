#include "lde/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "lde/comparison.hpp"
#include "lde/error.hpp"
#include "lde/value.hpp"

namespace lde {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::vector<double> lattice(std::size_t n, double lo, double hi) {
  std::vector<double> grid(n);
  for (std::size_t i = 0; i < n; ++i) {
    grid[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
  }
  return grid;
}

// Mixes p with the extreme policy on the side of `target`; t solves
// V((1-t) p + t extreme) = target by linearity of the value.
Policy move_to_value(const Policy& p, double current, double target,
                     const ExtremePolicies& extremes, const ValueRange& range) {
  if (target == current) return p;
  const bool up = target > current;
  const double span = up ? range.v_max - current : current - range.v_min;
  double t = up ? (target - current) / span : (current - target) / span;
  if (t > 1.0 && t <= 1.0 + 1e-9) t = 1.0;  // rounding at the clamp boundary
  if (!(span > 0.0) || !(t >= 0.0 && t <= 1.0)) {
    std::ostringstream msg;
    msg << "target value " << target << " unreachable from " << current;
    throw Error(ErrorCode::kInfeasible, msg.str());
  }
  return Policy::mix(up ? extremes.optimal : extremes.pessimal, p, t);
}

}  // namespace

std::string_view to_string(RewardKind kind) noexcept {
  return kind == RewardKind::kEx11 ? "ex11" : "ex12";
}

std::optional<RewardKind> parse_reward_kind(std::string_view name) noexcept {
  if (name == "ex11") return RewardKind::kEx11;
  if (name == "ex12") return RewardKind::kEx12;
  return std::nullopt;
}

double reward_ex11(double s, double a) {
  return (std::exp(s + a) + std::sin(kTwoPi * (s - a))) *
         (std::cos(kTwoPi * (s + a)) + std::exp(s - a));
}

double reward_ex12(double s, double a) {
  const double shift = a + std::cos(kTwoPi * s);
  return (3.0 + std::cos(kTwoPi * (s + a)) + std::cos(5.0 * kTwoPi * (s - a))) / 2.0 *
         std::exp(-shift * shift);
}

EnvTable build_env(RewardKind kind, std::size_t n_states, std::size_t n_actions) {
  if (n_states < 2 || n_actions < 2) {
    throw Error(ErrorCode::kInvalidArgument, "grid sizes must be at least 2");
  }
  auto states = lattice(n_states, 0.0, 1.0);
  auto actions = lattice(n_actions, -1.0, 1.0);
  const auto fn = kind == RewardKind::kEx11 ? &reward_ex11 : &reward_ex12;
  Eigen::MatrixXd rewards(static_cast<Eigen::Index>(n_states),
                          static_cast<Eigen::Index>(n_actions));
  for (std::size_t s = 0; s < n_states; ++s) {
    for (std::size_t a = 0; a < n_actions; ++a) {
      rewards(static_cast<Eigen::Index>(s), static_cast<Eigen::Index>(a)) =
          fn(states[s], actions[a]);
    }
  }
  return EnvTable(std::move(states), std::move(actions), std::move(rewards));
}

Policy sample_softmax_policy(std::size_t n_states, std::size_t n_actions, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::MatrixXd probs(static_cast<Eigen::Index>(n_states),
                        static_cast<Eigen::Index>(n_actions));
  for (Eigen::Index s = 0; s < probs.rows(); ++s) {
    for (Eigen::Index a = 0; a < probs.cols(); ++a) probs(s, a) = normal(rng);
    probs.row(s).array() -= probs.row(s).maxCoeff();
    probs.row(s) = probs.row(s).array().exp().matrix();
    probs.row(s) /= probs.row(s).sum();
  }
  return Policy(std::move(probs));
}

std::pair<Policy, Policy> adjust_pair_to_alpha(const EnvTable& env, const Policy& pi0,
                                               const Policy& mu0, double alpha) {
  if (!(alpha >= 0.0 && alpha < 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "alpha must lie in [0, 1)");
  }
  const ValueRange range = value_range(env);
  if (!(range.width() > 0.0)) {
    throw Error(ErrorCode::kDegenerateRange, "V_max equals V_min");
  }
  const double v_pi = value(env, pi0);
  const double v_mu = value(env, mu0);
  const double gap = alpha * range.width();
  const double centre = std::clamp(0.5 * (v_pi + v_mu), range.v_min + 0.5 * gap,
                                   range.v_max - 0.5 * gap);
  const ExtremePolicies extremes = extreme_policies(env);
  return {move_to_value(pi0, v_pi, centre + 0.5 * gap, extremes, range),
          move_to_value(mu0, v_mu, centre - 0.5 * gap, extremes, range)};
}

Dataset sample_history(const EnvTable& env, const Policy& behavior, std::size_t m,
                       Rng& rng) {
  check_conforms(env, behavior);
  if (m < 1) throw Error(ErrorCode::kInvalidArgument, "m must be at least 1");
  std::vector<HistoricalRecord> records;
  records.reserve(m * env.n_states());
  const auto& probs = behavior.probs();
  std::vector<double> weights(env.n_actions());
  for (std::size_t s = 0; s < env.n_states(); ++s) {
    for (std::size_t a = 0; a < env.n_actions(); ++a) {
      weights[a] = probs(static_cast<Eigen::Index>(s), static_cast<Eigen::Index>(a));
    }
    std::discrete_distribution<std::size_t> draw(weights.begin(), weights.end());
    for (std::size_t k = 0; k < m; ++k) {
      const std::size_t a = draw(rng);
      records.push_back({s, a, env.reward(s, a), behavior.prob(s, a)});
    }
  }
  return Dataset(std::move(records), DedupMode::kKeepAll);
}

ExperimentResult run_sweep(const SweepConfig& config) {
  for (double alpha : config.alphas) {
    if (!(alpha >= 0.0 && alpha < 1.0)) {
      throw Error(ErrorCode::kInvalidArgument, "alpha must lie in [0, 1)");
    }
  }
  for (std::size_t m : config.ms) {
    if (m < 1) throw Error(ErrorCode::kInvalidArgument, "m must be at least 1");
  }

  ExperimentResult result;
  for (const auto& e : config.estimators) result.methods.push_back(e.name);

  const std::size_t per_cell = config.tests;
  const std::size_t cells = config.alphas.size() * config.ms.size();
  const std::size_t total = per_cell * cells;
  if (total == 0) return result;

  const EnvTable env = build_env(config.kind, config.n_states, config.n_actions);
  const ValueRange range = value_range(env);
  result.tests.resize(total);

  parallel_for(total, config.jobs, [&](std::size_t index) {
    const std::size_t cell = index / per_cell;
    const std::size_t t = index % per_cell;
    const std::size_t ai = cell / config.ms.size();
    const std::size_t mi = cell % config.ms.size();
    const double alpha = config.alphas[ai];
    const std::size_t m = config.ms[mi];
    Rng rng = stream_rng(config.seed, {ai, mi, t});

    const Policy pi0 = sample_softmax_policy(env.n_states(), env.n_actions(), rng);
    const Policy mu0 = sample_softmax_policy(env.n_states(), env.n_actions(), rng);
    auto [better, worse] = adjust_pair_to_alpha(env, pi0, mu0, alpha);
    const Policy behavior = sample_softmax_policy(env.n_states(), env.n_actions(), rng);
    const Dataset data = sample_history(env, behavior, m, rng);
    const Baseline baseline = baseline_from_data(data);

    bool swap = false;
    if (config.randomize_orientation) {
      std::bernoulli_distribution coin(0.5);
      swap = coin(rng);
    }
    const Policy& pi = swap ? worse : better;
    const Policy& mu = swap ? better : worse;
    const std::vector<double> truth = {value(env, pi), value(env, mu)};

    TestRecord& record = result.tests[index];
    record.test_id = index;
    record.alpha = alpha;
    record.m = m;
    record.true_values = truth;
    const EstimateContext ctx{env, data, baseline};
    for (const auto& est : config.estimators) {
      const std::vector<double> estimates = {est.fn(ctx, pi), est.fn(ctx, mu)};
      record.reports.push_back(compare_policies(estimates, truth, range, est.name));
    }
  });
  return result;
}

}  // namespace lde
