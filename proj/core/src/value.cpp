#include "lde/value.hpp"

#include <vector>

#include "lde/error.hpp"

namespace lde {

double state_value(const EnvTable& env, const Policy& pi, std::size_t s) {
  check_conforms(env, pi);
  if (s >= env.n_states()) {
    throw Error(ErrorCode::kDimension, "state index out of range");
  }
  const auto row = static_cast<Eigen::Index>(s);
  return env.rewards().row(row).dot(pi.probs().row(row));
}

double value(const EnvTable& env, const Policy& pi) {
  check_conforms(env, pi);
  const Eigen::VectorXd per_state =
      env.rewards().cwiseProduct(pi.probs()).rowwise().sum();
  return env.state_distribution().dot(per_state);
}

ExtremePolicies extreme_policies(const EnvTable& env) {
  std::vector<std::size_t> best(env.n_states());
  std::vector<std::size_t> worst(env.n_states());
  const auto& r = env.rewards();
  for (Eigen::Index s = 0; s < r.rows(); ++s) {
    Eigen::Index hi = 0;
    Eigen::Index lo = 0;
    for (Eigen::Index a = 1; a < r.cols(); ++a) {
      if (r(s, a) > r(s, hi)) hi = a;
      if (r(s, a) < r(s, lo)) lo = a;
    }
    best[static_cast<std::size_t>(s)] = static_cast<std::size_t>(hi);
    worst[static_cast<std::size_t>(s)] = static_cast<std::size_t>(lo);
  }
  return {Policy::deterministic(best, env.n_actions()),
          Policy::deterministic(worst, env.n_actions())};
}

ValueRange value_range(const EnvTable& env) {
  const Eigen::VectorXd hi = env.rewards().rowwise().maxCoeff();
  const Eigen::VectorXd lo = env.rewards().rowwise().minCoeff();
  return {env.state_distribution().dot(hi), env.state_distribution().dot(lo)};
}

double normalized_value_difference(const EnvTable& env, const Policy& pi,
                                   const Policy& mu) {
  const ValueRange range = value_range(env);
  if (!(range.width() > 0.0)) {
    throw Error(ErrorCode::kDegenerateRange, "V_max equals V_min");
  }
  return (value(env, pi) - value(env, mu)) / range.width();
}

}  // namespace lde
