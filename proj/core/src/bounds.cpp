#include "lde/bounds.hpp"

#include <algorithm>
#include <cmath>

#include "lde/error.hpp"
#include "lde/value.hpp"

namespace lde {
namespace {

void require_radius(double radius) {
  if (!(radius > 0.0) || !std::isfinite(radius)) {
    throw Error(ErrorCode::kInvalidRadius, "radius must be positive and finite");
  }
}

double clamp_probability(double p) { return std::clamp(p, 0.0, 1.0); }

}  // namespace

double comparison_bound(std::size_t n_records, std::size_t n_actions,
                      double value_gap, double radius) {
  require_radius(radius);
  if (n_records < 1) throw Error(ErrorCode::kInvalidArgument, "N must be >= 1");
  if (n_actions < 2) throw Error(ErrorCode::kInvalidArgument, "need >= 2 actions");
  const double big_n = static_cast<double>(n_records);
  const double n = static_cast<double>(n_actions);
  const double exponent =
      big_n * big_n * value_gap * value_gap / (8.0 * std::pow(n, 4) * radius * radius);
  return clamp_probability(-std::expm1(-exponent));
}

double comparison_bound_dense(std::size_t m, std::size_t n_actions,
                            double value_gap, double radius) {
  require_radius(radius);
  if (m < 1 || m > n_actions) {
    throw Error(ErrorCode::kInvalidArgument, "m must lie in [1, n]");
  }
  const double mm = static_cast<double>(m);
  const double n = static_cast<double>(n_actions);
  const double exponent =
      mm * mm * value_gap * value_gap / (8.0 * n * n * radius * radius);
  return clamp_probability(-std::expm1(-exponent));
}

double state_comparison_bound(double delta, std::size_t m, std::size_t n_actions,
                      double state_gap, double radius) {
  require_radius(radius);
  if (!(delta >= 0.0)) throw Error(ErrorCode::kInvalidArgument, "delta must be >= 0");
  if (n_actions < 1 || m > n_actions) {
    throw Error(ErrorCode::kInvalidArgument, "m must not exceed the action count");
  }
  const double ratio = static_cast<double>(m) / static_cast<double>(n_actions);
  const double slack = (delta + ratio * state_gap * state_gap) / (2.0 * radius * radius);
  return 1.0 / (1.0 + slack);
}

double bound_radius(const EnvTable& env, const Baseline& baseline) {
  baseline.check_conforms(env.n_states(), env.n_actions());
  double expected = 0.0;
  for (std::size_t s = 0; s < env.n_states(); ++s) {
    expected += env.state_distribution()(static_cast<Eigen::Index>(s)) *
                baseline.state_level(s);
  }
  const double radius =
      std::max(env.reward_max() - expected, expected - env.reward_min());
  if (!(radius > 0.0)) {
    throw Error(ErrorCode::kDegenerateRadius,
                "constant rewards equal to the baseline give R = 0");
  }
  return radius;
}

double state_bound_radius(const EnvTable& env, const Baseline& baseline,
                          std::size_t s) {
  baseline.check_conforms(env.n_states(), env.n_actions());
  const double level = baseline.state_level(s);
  const double radius = std::max(env.reward_max() - level, level - env.reward_min());
  if (!(radius > 0.0)) {
    throw Error(ErrorCode::kDegenerateRadius, "per-state radius is zero");
  }
  return radius;
}

BoundReport::BoundReport(const EnvTable& env, const Policy& pi, const Policy& mu,
                         const Baseline& baseline, std::size_t m)
    : m_(m),
      n_actions_(env.n_actions()),
      radius_(bound_radius(env, baseline)),
      value_gap_(value(env, pi) - value(env, mu)) {
  const std::size_t n_records = m * env.n_states();
  p_comp_lower_ = comparison_bound(n_records, n_actions_, value_gap_, radius_);
  p_comp_lower_proof_ = comparison_bound_dense(m, n_actions_, value_gap_, radius_);
  state_gaps_.reserve(env.n_states());
  state_radii_.reserve(env.n_states());
  for (std::size_t s = 0; s < env.n_states(); ++s) {
    state_gaps_.push_back(state_value(env, pi, s) - state_value(env, mu, s));
    state_radii_.push_back(state_bound_radius(env, baseline, s));
  }
}

double BoundReport::per_state_upper(double delta, std::size_t s) const {
  if (s >= state_gaps_.size()) {
    throw Error(ErrorCode::kDimension, "state index out of range");
  }
  return state_comparison_bound(delta, m_, n_actions_, state_gaps_[s], state_radii_[s]);
}

}  // namespace lde
