#include <gtest/gtest.h>

#include "lde/error.hpp"
#include "lde/value.hpp"
#include "support.hpp"

using namespace lde;

TEST(Value, StateValueExamples) {
  const auto env = fixtures::toy_env();
  EXPECT_NEAR(state_value(env, Policy::uniform(2, 3), 0), 0.5, 1e-15);
  const std::vector<std::size_t> first = {0, 0};
  EXPECT_DOUBLE_EQ(state_value(env, Policy::deterministic(first, 3), 0), 1.0);
  Eigen::MatrixXd p(2, 3);
  p << 0.2, 0.3, 0.5, 0.2, 0.3, 0.5;
  EXPECT_NEAR(state_value(env, Policy(p), 0), 0.45, 1e-15);
}

TEST(Value, ValueExamples) {
  const auto env = fixtures::toy_env();
  const auto uniform = Policy::uniform(2, 3);
  EXPECT_NEAR(value(env, uniform), 0.5, 1e-15);
  const std::vector<std::size_t> picks = {0, 1};
  const auto det = Policy::deterministic(picks, 3);
  EXPECT_NEAR(value(env, det), 0.9, 1e-15);
  EXPECT_NEAR(value(env, Policy::mix(det, uniform, 0.5)), 0.7, 1e-15);
}

TEST(Value, ShapeMismatch) {
  const auto env = fixtures::toy_env();
  EXPECT_THROW(value(env, Policy::uniform(2, 4)), Error);
  EXPECT_THROW(state_value(env, Policy::uniform(2, 3), 2), Error);
}

TEST(Value, WeightedStateDistribution) {
  const auto base = fixtures::toy_env();
  Eigen::VectorXd w(2);
  w << 0.25, 0.75;
  const auto env = EnvTable::from_rewards(base.rewards(), w);
  EXPECT_NEAR(value(env, Policy::uniform(2, 3)), 0.25 * 0.5 + 0.75 * 0.5, 1e-15);
}

TEST(Value, ExtremePolicies) {
  const auto env = fixtures::toy_env();
  const auto ex = extreme_policies(env);
  EXPECT_NEAR(value(env, ex.optimal), 0.9, 1e-15);
  EXPECT_NEAR(value(env, ex.pessimal), 0.1, 1e-15);

  const auto flat = EnvTable::from_rewards(Eigen::MatrixXd::Constant(2, 2, 0.3));
  const auto r = value_range(flat);
  EXPECT_EQ(r.v_max, 0.3);
  EXPECT_EQ(r.v_min, 0.3);
  // Lowest index wins ties.
  EXPECT_EQ(extreme_policies(flat).optimal.prob(0, 0), 1.0);

  Eigen::MatrixXd one(1, 2);
  one << 0.0, 1.0;
  EXPECT_EQ(extreme_policies(EnvTable::from_rewards(one)).optimal.prob(0, 1), 1.0);
}

TEST(Value, NormalizedDifference) {
  const auto env = fixtures::toy_env();
  const std::vector<std::size_t> picks = {0, 1};
  const auto best = Policy::deterministic(picks, 3);
  const auto uniform = Policy::uniform(2, 3);
  EXPECT_NEAR(normalized_value_difference(env, best, uniform), 0.5, 1e-15);
  EXPECT_EQ(normalized_value_difference(env, uniform, uniform), 0.0);
  EXPECT_EQ(normalized_value_difference(env, uniform, best),
            -normalized_value_difference(env, best, uniform));

  const auto flat = EnvTable::from_rewards(Eigen::MatrixXd::Constant(2, 2, 0.3));
  try {
    normalized_value_difference(flat, Policy::uniform(2, 2), Policy::uniform(2, 2));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kDegenerateRange);
  }
}

TEST(Value, LinearityAndOrderingProperties) {
  Rng rng(11);
  for (int trial = 0; trial < 100; ++trial) {
    const auto env = EnvTable::from_rewards(fixtures::uniform_matrix(4, 5, -1.0, 1.0, rng));
    const auto a = fixtures::random_policy(4, 5, rng);
    const auto b = fixtures::random_policy(4, 5, rng);
    const double t = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
    EXPECT_NEAR(value(env, Policy::mix(a, b, t)), t * value(env, a) + (1 - t) * value(env, b),
                1e-12);
    const auto ex = extreme_policies(env);
    EXPECT_GE(value(env, ex.optimal), value(env, a));
    EXPECT_LE(value(env, ex.pessimal), value(env, a));
  }
}
