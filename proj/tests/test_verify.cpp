#include <gtest/gtest.h>

#include <set>

#include "lde/verify.hpp"

using namespace lde;

TEST(Verify, SubsetSampler) {
  Rng rng(1);
  std::vector<int> hits(5, 0);
  for (int i = 0; i < 5000; ++i) {
    const auto s = sample_action_subset(5, 2, rng);
    ASSERT_EQ(s.size(), 2u);
    EXPECT_NE(s[0], s[1]);
    for (auto a : s) ++hits[a];
  }
  // Each action is included with probability m / n = 0.4.
  for (int h : hits) EXPECT_NEAR(h / 5000.0, 0.4, 0.03);
}

TEST(Verify, SmallRunHasNoViolations) {
  BoundCheckConfig c;
  c.pairs = 3;
  c.ms = {1, 3};
  c.resamples = 2000;
  c.seed = 5;
  const auto rows = verify_bounds(c);
  // Two comparison forms plus |S| x |deltas| per-state rows per (pair, m).
  EXPECT_EQ(rows.size(), 3u * 2u * (2u + 4u * 3u));
  for (const auto& r : rows) {
    EXPECT_FALSE(r.violated) << to_string(r.kind) << " pair " << r.pair << " m " << r.m;
    EXPECT_GE(r.observed, 0.0);
    EXPECT_LE(r.observed, 1.0);
  }
}

TEST(Verify, IndependentOfJobs) {
  BoundCheckConfig c;
  c.pairs = 2;
  c.resamples = 500;
  c.seed = 9;
  const auto a = verify_bounds(c);
  c.jobs = 3;
  const auto b = verify_bounds(c);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].observed, b[i].observed);
    EXPECT_EQ(a[i].bound, b[i].bound);
  }
}
