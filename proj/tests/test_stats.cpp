#include <gtest/gtest.h>

#include <cmath>

#include "lde/error.hpp"
#include "lde/stats.hpp"

using namespace lde;

TEST(Stats, MeanAndStd) {
  const std::vector<double> x = {1, 2, 3, 4};
  EXPECT_DOUBLE_EQ(mean(x), 2.5);
  EXPECT_DOUBLE_EQ(stddev(x), std::sqrt(1.25));
}

TEST(Stats, AverageRanks) {
  const std::vector<double> x = {10, 20, 20, 5};
  EXPECT_EQ(average_ranks(x), (std::vector<double>{2, 3.5, 3.5, 1}));
}

TEST(Stats, CorrelationExamples) {
  const std::vector<double> x = {-2, -1, 0, 1, 2};
  std::vector<double> lin, neg, cube;
  for (double v : x) {
    lin.push_back(2 * v + 1);
    neg.push_back(-v);
    cube.push_back(v * v * v);
  }
  EXPECT_NEAR(pearson(x, lin), 1.0, 1e-15);
  EXPECT_NEAR(spearman(x, lin), 1.0, 1e-15);
  EXPECT_NEAR(pearson(x, neg), -1.0, 1e-15);
  EXPECT_NEAR(spearman(x, neg), -1.0, 1e-15);
  EXPECT_NEAR(spearman(x, cube), 1.0, 1e-15);
  EXPECT_LT(pearson(x, cube), 1.0 - 1e-3);
}

TEST(Stats, CorrelationAgainstTextbookValue) {
  // Deviations from the means give sxy = 8, sxx = 10, syy = 10.
  const std::vector<double> x = {1, 2, 3, 4, 5};
  const std::vector<double> y = {2, 1, 4, 3, 5};
  EXPECT_NEAR(pearson(x, y), 0.8, 1e-15);
}

TEST(Stats, CorrelationErrors) {
  const std::vector<double> x = {1, 2, 3};
  const std::vector<double> flat = {1, 1, 1};
  try {
    pearson(x, flat);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kUndefinedCorrelation);
  }
  EXPECT_THROW(spearman(flat, x), Error);
  const std::vector<double> two = {1, 2};
  EXPECT_THROW(pearson(x, two), Error);
  const std::vector<double> one = {1};
  EXPECT_THROW(pearson(one, one), Error);
}

TEST(Stats, SpearmanMonotoneInvariance) {
  Rng rng(31);
  std::normal_distribution<double> n(0, 1);
  std::vector<double> x(50), y(50), fx(50);
  for (std::size_t i = 0; i < 50; ++i) {
    x[i] = n(rng);
    y[i] = x[i] + n(rng);
    fx[i] = std::exp(x[i]);
  }
  EXPECT_DOUBLE_EQ(spearman(x, y), spearman(fx, y));
}

TEST(Stats, BootstrapGapStandardError) {
  Rng rng(32);
  std::normal_distribution<double> n(0, 1);
  std::vector<double> x(400), y1(400), y2(400);
  for (std::size_t i = 0; i < 400; ++i) {
    x[i] = n(rng);
    y1[i] = x[i] + 0.5 * n(rng);
    y2[i] = x[i] + 2.0 * n(rng);
  }
  Rng boot(1);
  const double se = pearson_gap_standard_error(x, y1, y2, 500, boot);
  EXPECT_GT(se, 0.005);
  EXPECT_LT(se, 0.1);
  // Identical series have no gap and no spread.
  Rng boot2(1);
  EXPECT_EQ(pearson_gap_standard_error(x, y1, y1, 100, boot2), 0.0);
}
