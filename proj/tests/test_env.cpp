#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <set>

#include "lde/env.hpp"
#include "lde/error.hpp"
#include "support.hpp"

using namespace lde;

namespace {

ErrorCode code_of(const auto& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no lde::Error thrown";
  return ErrorCode::kInvalidArgument;
}

}  // namespace

TEST(EnvTable, RejectsBadShapes) {
  EXPECT_EQ(code_of([] { EnvTable::from_rewards(Eigen::MatrixXd::Zero(2, 1)); }),
            ErrorCode::kDimension);
  EXPECT_EQ(code_of([] { EnvTable::from_rewards(Eigen::MatrixXd::Zero(0, 3)); }),
            ErrorCode::kDimension);
  EXPECT_EQ(code_of([] {
              EnvTable({0.0}, {0.0, 1.0, 2.0}, Eigen::MatrixXd::Zero(1, 2));
            }),
            ErrorCode::kDimension);
}

TEST(EnvTable, RejectsNonFiniteRewards) {
  Eigen::MatrixXd r = Eigen::MatrixXd::Zero(2, 2);
  r(1, 1) = std::numeric_limits<double>::quiet_NaN();
  EXPECT_THROW(EnvTable::from_rewards(r), Error);
  r(1, 1) = std::numeric_limits<double>::infinity();
  EXPECT_THROW(EnvTable::from_rewards(r), Error);
}

TEST(EnvTable, StateDistribution) {
  const auto env = fixtures::toy_env();
  EXPECT_DOUBLE_EQ(env.state_distribution()(0), 0.5);
  Eigen::VectorXd bad(2);
  bad << 0.5, 0.6;
  EXPECT_THROW(EnvTable::from_rewards(env.rewards(), bad), Error);
  bad << -0.5, 1.5;
  EXPECT_THROW(EnvTable::from_rewards(env.rewards(), bad), Error);
  Eigen::VectorXd ok(2);
  ok << 0.25, 0.75;
  EXPECT_NO_THROW(EnvTable::from_rewards(env.rewards(), ok));
}

TEST(Policy, Validation) {
  Eigen::MatrixXd p(1, 2);
  p << 0.5, 0.6;
  EXPECT_THROW(Policy{p}, Error);
  p << -0.1, 1.1;
  EXPECT_THROW(Policy{p}, Error);
  p << 0.25, 0.75;
  EXPECT_NO_THROW(Policy{p});
}

TEST(Policy, MixIsConvex) {
  Rng rng(1);
  const auto a = fixtures::random_policy(3, 4, rng);
  const auto b = fixtures::random_policy(3, 4, rng);
  for (double t : {0.0, 0.3, 1.0}) {
    const auto m = Policy::mix(a, b, t);
    for (std::size_t s = 0; s < 3; ++s) {
      for (std::size_t k = 0; k < 4; ++k) {
        EXPECT_NEAR(m.prob(s, k), t * a.prob(s, k) + (1 - t) * b.prob(s, k), 1e-15);
      }
    }
  }
  EXPECT_THROW(Policy::mix(a, b, 1.5), Error);
}

TEST(Policy, Deterministic) {
  const std::vector<std::size_t> actions = {2, 0};
  const auto p = Policy::deterministic(actions, 3);
  EXPECT_EQ(p.prob(0, 2), 1.0);
  EXPECT_EQ(p.prob(1, 0), 1.0);
  EXPECT_EQ(p.prob(1, 1), 0.0);
  const std::vector<std::size_t> out_of_range = {3};
  EXPECT_THROW(Policy::deterministic(out_of_range, 3), Error);
}

TEST(Dataset, RecordValidation) {
  EXPECT_THROW(Dataset({{0, 0, 1.0, 0.0}}), Error);
  EXPECT_THROW(Dataset({{0, 0, 1.0, 1.5}}), Error);
  EXPECT_THROW(Dataset({{0, 0, std::nan(""), 0.5}}), Error);
}

TEST(Dataset, LatestWinsKeepsLastRecordPerPair) {
  const Dataset d({{0, 1, 1.0, 0.5}, {1, 0, 2.0, 0.5}, {0, 1, 3.0, 0.25}},
                  DedupMode::kLatestWins);
  ASSERT_EQ(d.size(), 2u);
  EXPECT_EQ(d.records()[0], (HistoricalRecord{1, 0, 2.0, 0.5}));
  EXPECT_EQ(d.records()[1], (HistoricalRecord{0, 1, 3.0, 0.25}));

  const Dataset again(d.records(), DedupMode::kLatestWins);
  EXPECT_EQ(again.records(), d.records());
}

TEST(Dataset, KeepAllAndCounts) {
  const Dataset d({{0, 1, 1.0, 0.5}, {0, 1, 3.0, 0.5}, {2, 0, 0.0, 1.0}}, DedupMode::kKeepAll);
  EXPECT_EQ(d.size(), 3u);
  EXPECT_EQ(d.count_at(0), 2u);
  EXPECT_EQ(d.count_at(1), 0u);
  EXPECT_EQ(d.max_state(), 2u);
  EXPECT_EQ(d.max_action(), 1u);
}

TEST(Dataset, LatestWinsHasNoDuplicatePairs) {
  Rng rng(7);
  for (int trial = 0; trial < 50; ++trial) {
    const Dataset d(fixtures::random_records(40, 3, 3, rng));
    std::set<std::pair<std::size_t, std::size_t>> seen;
    for (const auto& r : d.records()) EXPECT_TRUE(seen.insert({r.state, r.action}).second);
  }
}
