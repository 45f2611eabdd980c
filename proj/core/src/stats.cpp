#include "lde/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "lde/error.hpp"

namespace lde {

double mean(std::span<const double> x) {
  if (x.empty()) throw Error(ErrorCode::kEmptyData, "mean of an empty sample");
  return std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
}

double stddev(std::span<const double> x) {
  const double mu = mean(x);
  double ss = 0.0;
  for (double v : x) ss += (v - mu) * (v - mu);
  return std::sqrt(ss / static_cast<double>(x.size()));
}

std::vector<double> average_ranks(std::span<const double> x) {
  std::vector<std::size_t> order(x.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return x[a] < x[b]; });
  std::vector<double> ranks(x.size());
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i + 1;
    while (j < order.size() && x[order[j]] == x[order[i]]) ++j;
    // Ranks i+1 .. j averaged.
    const double shared = 0.5 * static_cast<double>(i + 1 + j);
    for (std::size_t k = i; k < j; ++k) ranks[order[k]] = shared;
    i = j;
  }
  return ranks;
}

double pearson(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw Error(ErrorCode::kDimension, "length mismatch");
  if (x.size() < 2) throw Error(ErrorCode::kDimension, "need at least two points");
  const double mx = mean(x);
  const double my = mean(y);
  double sxy = 0.0;
  double sxx = 0.0;
  double syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - mx;
    const double dy = y[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0) {
    throw Error(ErrorCode::kUndefinedCorrelation, "zero variance");
  }
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

double spearman(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw Error(ErrorCode::kDimension, "length mismatch");
  const auto rx = average_ranks(x);
  const auto ry = average_ranks(y);
  return pearson(rx, ry);
}

double pearson_gap_standard_error(std::span<const double> x,
                                  std::span<const double> y1,
                                  std::span<const double> y2,
                                  std::size_t resamples, Rng& rng) {
  if (x.size() != y1.size() || x.size() != y2.size()) {
    throw Error(ErrorCode::kDimension, "length mismatch");
  }
  if (resamples < 2) throw Error(ErrorCode::kInvalidArgument, "need >= 2 resamples");
  const std::size_t n = x.size();
  std::uniform_int_distribution<std::size_t> pick(0, n - 1);
  std::vector<double> bx(n), b1(n), b2(n), gaps;
  gaps.reserve(resamples);
  while (gaps.size() < resamples) {
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t k = pick(rng);
      bx[i] = x[k];
      b1[i] = y1[k];
      b2[i] = y2[k];
    }
    try {
      gaps.push_back(pearson(bx, b1) - pearson(bx, b2));
    } catch (const Error& e) {
      // A degenerate resample carries no information about the spread.
      if (e.code() != ErrorCode::kUndefinedCorrelation) throw;
    }
  }
  const double mu = mean(gaps);
  double ss = 0.0;
  for (double g : gaps) ss += (g - mu) * (g - mu);
  return std::sqrt(ss / static_cast<double>(gaps.size() - 1));
}

}  // namespace lde
