#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "lde/error.hpp"
#include "lde/estimators.hpp"
#include "lde/value.hpp"
#include "support.hpp"

using namespace lde;

namespace {

// Literal per-record sums, written independently of the library kernel.
struct Oracle {
  const std::vector<HistoricalRecord>& recs;
  const Policy& pi;
  const Eigen::MatrixXd& rhat;

  double dim() const {
    double s = 0;
    for (const auto& r : recs) s += r.reward * pi.prob(r.state, r.action);
    return s / static_cast<double>(recs.size());
  }
  double ips() const {
    double s = 0;
    for (const auto& r : recs) s += r.reward * pi.prob(r.state, r.action) / r.behavior_prob;
    return s / static_cast<double>(recs.size());
  }
  double expect_rhat(std::size_t s) const {
    double e = 0;
    for (Eigen::Index a = 0; a < rhat.cols(); ++a) {
      e += rhat(static_cast<Eigen::Index>(s), a) * pi.prob(s, static_cast<std::size_t>(a));
    }
    return e;
  }
  double dre() const {
    double s = 0;
    for (const auto& r : recs) {
      const double res = r.reward - rhat(static_cast<Eigen::Index>(r.state),
                                         static_cast<Eigen::Index>(r.action));
      s += res * pi.prob(r.state, r.action) / r.behavior_prob + expect_rhat(r.state);
    }
    return s / static_cast<double>(recs.size());
  }
  double lde() const {
    double s = 0;
    for (const auto& r : recs) {
      const double res = r.reward - rhat(static_cast<Eigen::Index>(r.state),
                                         static_cast<Eigen::Index>(r.action));
      s += res * pi.prob(r.state, r.action) + expect_rhat(r.state);
    }
    return s / static_cast<double>(recs.size());
  }
};

std::vector<HistoricalRecord> spec_records() {
  return {{0, 0, 1.0, 1.0 / 3}, {1, 2, 0.5, 1.0 / 3}};
}

}  // namespace

TEST(Baseline, FromData) {
  EXPECT_DOUBLE_EQ(baseline_from_data(Dataset({{0, 0, 1.0, 1}, {0, 1, 0.5, 1}})).at(0, 0), 0.75);
  EXPECT_DOUBLE_EQ(
      baseline_from_data(Dataset({{0, 0, 0, 1}, {0, 1, 0, 1}, {1, 0, 0, 1}})).at(3, 2), 0.0);
  EXPECT_DOUBLE_EQ(baseline_from_data(Dataset({{0, 0, 0.3, 1}})).at(0, 0), 0.3);
  try {
    baseline_from_data(Dataset({}));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kEmptyData);
  }
}

TEST(Baseline, Kinds) {
  Eigen::VectorXd v(2);
  v << 1.0, 3.0;
  const auto ps = Baseline::per_state(v);
  EXPECT_EQ(ps.at(1, 2), 3.0);
  EXPECT_EQ(ps.state_level(0), 1.0);
  Eigen::MatrixXd t(2, 2);
  t << 1, 2, 3, 4;
  const auto tb = Baseline::table(t);
  EXPECT_EQ(tb.at(1, 0), 3.0);
  EXPECT_EQ(tb.state_level(1), 3.5);
  EXPECT_THROW(tb.check_conforms(3, 2), Error);
  Eigen::MatrixXd p(2, 2);
  p << 0.25, 0.75, 1.0, 0.0;
  EXPECT_DOUBLE_EQ(tb.expectation(0, Policy(p)), 1.75);
  EXPECT_THROW(Baseline::constant(std::nan("")), Error);
}

TEST(Estimators, SpecExamples) {
  const Dataset d(spec_records());
  const auto uniform = Policy::uniform(2, 3);
  EXPECT_NEAR(dim(d, uniform), 0.25, 1e-15);
  EXPECT_NEAR(ips(d, uniform), 0.75, 1e-15);
  EXPECT_NEAR(dre(d, uniform, 3, Baseline::constant(0.75)), 0.75, 1e-15);
  EXPECT_NEAR(lde::lde(d, uniform, 3, Baseline::constant(0.75)), 0.75, 1e-15);
}

TEST(Estimators, DimSpecialCases) {
  const Dataset d(spec_records());
  Eigen::MatrixXd on(2, 3), off(2, 3);
  on << 1, 0, 0, 0, 0, 1;
  off << 0, 0.5, 0.5, 0.5, 0.5, 0;
  EXPECT_NEAR(dim(d, Policy(on)), 0.75, 1e-15);
  EXPECT_EQ(dim(d, Policy(off)), 0.0);
}

TEST(Estimators, IpsSpecialCases) {
  Rng rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    const auto pi = fixtures::random_policy(3, 4, rng);
    auto recs = fixtures::random_records(15, 3, 4, rng);
    for (auto& r : recs) r.behavior_prob = pi.prob(r.state, r.action);
    const Dataset matched(recs, DedupMode::kKeepAll);
    double mean_reward = 0;
    for (const auto& r : recs) mean_reward += r.reward;
    EXPECT_NEAR(ips(matched, pi), mean_reward / 15.0, 1e-12);

    for (auto& r : recs) r.behavior_prob = 0.25;
    const Dataset flat(recs, DedupMode::kKeepAll);
    EXPECT_NEAR(ips(flat, pi), 4.0 * dim(flat, pi), 1e-12);
  }
}

TEST(Estimators, DivisionGuardAndEmpty) {
  RecordTerms t{1.0, 0.5, 1e-13, 0.0, 0.0};
  try {
    ips(std::span<const RecordTerms>(&t, 1));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kDivisionGuard);
  }
  EXPECT_THROW(dre(std::span<const RecordTerms>(&t, 1)), Error);
  EXPECT_NO_THROW(lde::lde(std::span<const RecordTerms>(&t, 1)));
  const Dataset empty({});
  EXPECT_THROW(dim(empty, Policy::uniform(1, 2)), Error);
  EXPECT_THROW(lde::lde(empty, Policy::uniform(1, 2), 2, Baseline::constant(0)), Error);
}

TEST(Estimators, ExactBaselineGivesMeanStateValue) {
  Rng rng(9);
  const auto env = EnvTable::from_rewards(fixtures::uniform_matrix(3, 4, 0.0, 1.0, rng));
  const auto pi = fixtures::random_policy(3, 4, rng);
  const Dataset d(fixtures::random_records(12, 3, 4, rng), DedupMode::kKeepAll);
  std::vector<HistoricalRecord> recs;
  for (auto r : d.records()) {
    r.reward = env.reward(r.state, r.action);
    recs.push_back(r);
  }
  const Dataset exact(recs, DedupMode::kKeepAll);
  double expected = 0;
  for (const auto& r : recs) expected += state_value(env, pi, r.state);
  expected /= static_cast<double>(recs.size());
  const auto table = Baseline::table(env.rewards());
  EXPECT_NEAR(lde::lde(exact, pi, 4, table), expected, 1e-12);
  EXPECT_NEAR(dre(exact, pi, 4, table), expected, 1e-12);
}

TEST(Estimators, MatchLiteralOracle) {
  Rng rng(21);
  for (int trial = 0; trial < 200; ++trial) {
    const auto recs = fixtures::random_records(1 + trial % 17, 3, 4, rng);
    const Dataset d(recs, DedupMode::kKeepAll);
    const auto pi = fixtures::random_policy(3, 4, rng);
    const Eigen::MatrixXd rhat = fixtures::uniform_matrix(3, 4, -1.0, 1.0, rng);
    const Oracle o{recs, pi, rhat};
    const auto b = Baseline::table(rhat);
    EXPECT_NEAR(dim(d, pi), o.dim(), 1e-12);
    EXPECT_NEAR(ips(d, pi), o.ips(), 1e-12);
    EXPECT_NEAR(dre(d, pi, 4, b), o.dre(), 1e-12);
    EXPECT_NEAR(lde::lde(d, pi, 4, b), o.lde(), 1e-12);
  }
}

TEST(Estimators, ReductionIdentities) {
  Rng rng(3);
  for (int trial = 0; trial < 200; ++trial) {
    auto recs = fixtures::random_records(10, 3, 4, rng);
    const auto pi = fixtures::random_policy(3, 4, rng);
    const Dataset d(recs, DedupMode::kKeepAll);
    const auto zero = Baseline::constant(0.0);
    EXPECT_NEAR(lde::lde(d, pi, 4, zero), dim(d, pi), 1e-12);
    EXPECT_NEAR(dre(d, pi, 4, zero), ips(d, pi), 1e-12);
    for (auto& r : recs) r.behavior_prob = 1.0;
    const Dataset certain(recs, DedupMode::kKeepAll);
    const auto b = Baseline::table(fixtures::uniform_matrix(3, 4, -1, 1, rng));
    EXPECT_NEAR(dre(certain, pi, 4, b), lde::lde(certain, pi, 4, b), 1e-12);
  }
}

TEST(Estimators, LdeIgnoresBehaviorProbabilities) {
  Rng rng(4);
  auto recs = fixtures::random_records(20, 3, 4, rng);
  const auto pi = fixtures::random_policy(3, 4, rng);
  const auto b = Baseline::constant(0.4);
  const double before = lde::lde(Dataset(recs, DedupMode::kKeepAll), pi, 4, b);
  for (auto& r : recs) r.behavior_prob = 0.5 * r.behavior_prob + 0.01;
  EXPECT_EQ(lde::lde(Dataset(recs, DedupMode::kKeepAll), pi, 4, b), before);
}

TEST(Estimators, PermutationInvariant) {
  Rng rng(8);
  auto recs = fixtures::random_records(25, 3, 4, rng);
  const auto pi = fixtures::random_policy(3, 4, rng);
  const auto b = Baseline::constant(0.2);
  const Dataset d(recs, DedupMode::kKeepAll);
  std::shuffle(recs.begin(), recs.end(), rng);
  const Dataset e(recs, DedupMode::kKeepAll);
  EXPECT_NEAR(dim(d, pi), dim(e, pi), 1e-12);
  EXPECT_NEAR(ips(d, pi), ips(e, pi), 1e-12);
  EXPECT_NEAR(dre(d, pi, 4, b), dre(e, pi, 4, b), 1e-12);
  EXPECT_NEAR(lde::lde(d, pi, 4, b), lde::lde(e, pi, 4, b), 1e-12);
}

TEST(Estimators, ParseAndNames) {
  EXPECT_EQ(parse_estimator("lde"), Estimator::kLde);
  EXPECT_EQ(parse_estimator("DiM"), Estimator::kDim);
  EXPECT_FALSE(parse_estimator("snips").has_value());
  EXPECT_EQ(to_string(Estimator::kDre), "DRE");
  EXPECT_EQ(all_estimators().size(), 4u);
}

// Enumerating every dataset with m distinct uniformly chosen actions per state
// gives the exact expectation of each estimator.
class Enumeration : public ::testing::Test {
 protected:
  static constexpr std::size_t kStates = 3;
  static constexpr std::size_t kActions = 4;

  template <class Fn>
  static double mean_over_datasets(std::size_t m, double p, Fn&& fn) {
    const auto subs = fixtures::subsets(kActions, m);
    double total = 0;
    std::size_t count = 0;
    for (const auto& a0 : subs) {
      for (const auto& a1 : subs) {
        for (const auto& a2 : subs) {
          std::vector<HistoricalRecord> recs;
          const std::vector<std::size_t>* picks[] = {&a0, &a1, &a2};
          for (std::size_t s = 0; s < kStates; ++s) {
            for (std::size_t a : *picks[s]) recs.push_back({s, a, 0.0, p});
          }
          total += fn(recs);
          ++count;
        }
      }
    }
    return total / static_cast<double>(count);
  }
};

TEST_F(Enumeration, LdeExpectationClosedForm) {
  Rng rng(42);
  for (int trial = 0; trial < 10; ++trial) {
    const auto env = EnvTable::from_rewards(fixtures::uniform_matrix(kStates, kActions, 0, 1, rng));
    const auto pi = fixtures::random_policy(kStates, kActions, rng);
    const Eigen::MatrixXd rhat = fixtures::uniform_matrix(kStates, kActions, 0, 1, rng);
    const auto b = Baseline::table(rhat);
    // E[LDE] = E_s[ sum_a rhat pi + (V(pi|s) - sum_a rhat pi) / n ].
    double closed = 0;
    for (std::size_t s = 0; s < kStates; ++s) {
      double rp = 0;
      for (std::size_t a = 0; a < kActions; ++a) {
        rp += rhat(static_cast<Eigen::Index>(s), static_cast<Eigen::Index>(a)) * pi.prob(s, a);
      }
      closed += (rp + (state_value(env, pi, s) - rp) / static_cast<double>(kActions)) /
                static_cast<double>(kStates);
    }
    for (std::size_t m = 1; m <= 3; ++m) {
      const double mean = mean_over_datasets(m, 1.0, [&](auto recs) {
        for (auto& r : recs) r.reward = env.reward(r.state, r.action);
        return lde::lde(Dataset(recs, DedupMode::kKeepAll), pi, kActions, b);
      });
      EXPECT_NEAR(mean, closed, 1e-12) << "m = " << m;
    }
  }
}

TEST_F(Enumeration, IpsUnbiasedWithInclusionProbabilityOverM) {
  Rng rng(43);
  const auto env = EnvTable::from_rewards(fixtures::uniform_matrix(kStates, kActions, 0, 1, rng));
  const auto pi = fixtures::random_policy(kStates, kActions, rng);
  const double v = value(env, pi);
  // p_n = m/n is exact for m = 1 only; with N = m|S| records the weights must
  // be 1/n for every m.
  for (std::size_t m = 1; m <= 3; ++m) {
    const double p = 1.0 / static_cast<double>(kActions);
    const double mean = mean_over_datasets(m, p, [&](auto recs) {
      for (auto& r : recs) r.reward = env.reward(r.state, r.action);
      return ips(Dataset(recs, DedupMode::kKeepAll), pi);
    });
    EXPECT_NEAR(mean, v, 1e-12) << "m = " << m;
  }
  const double m1 = mean_over_datasets(1, 0.25, [&](auto recs) {
    for (auto& r : recs) r.reward = env.reward(r.state, r.action);
    return ips(Dataset(recs, DedupMode::kKeepAll), pi);
  });
  EXPECT_NEAR(m1, v, 1e-12);
  const double m2 = mean_over_datasets(2, 0.5, [&](auto recs) {
    for (auto& r : recs) r.reward = env.reward(r.state, r.action);
    return ips(Dataset(recs, DedupMode::kKeepAll), pi);
  });
  EXPECT_NEAR(m2, v / 2.0, 1e-12);
}

TEST(Estimators, InjectedEstimatorsMatchDirectCalls) {
  Rng rng(12);
  const auto env = EnvTable::from_rewards(fixtures::uniform_matrix(3, 4, 0, 1, rng));
  const Dataset d(fixtures::random_records(9, 3, 4, rng), DedupMode::kKeepAll);
  const auto b = Baseline::constant(0.3);
  const auto pi = fixtures::random_policy(3, 4, rng);
  const EstimateContext ctx{env, d, b};
  const auto named = make_estimators(all_estimators());
  EXPECT_EQ(named[0].name, "LDE");
  EXPECT_DOUBLE_EQ(named[0].fn(ctx, pi), lde::lde(d, pi, 4, b));
  EXPECT_DOUBLE_EQ(named[1].fn(ctx, pi), dre(d, pi, 4, b));
  EXPECT_DOUBLE_EQ(named[2].fn(ctx, pi), ips(d, pi));
  EXPECT_DOUBLE_EQ(named[3].fn(ctx, pi), dim(d, pi));
}
