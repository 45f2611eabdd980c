#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "lde/random.hpp"

namespace lde {

double mean(std::span<const double> x);
// Population standard deviation (divides by n).
double stddev(std::span<const double> x);

// 1-based ranks; tied values share the average of the ranks they span.
std::vector<double> average_ranks(std::span<const double> x);

// Product-moment correlation. Throws kUndefinedCorrelation when either input
// has zero variance, kDimension on length mismatch or fewer than two points.
double pearson(std::span<const double> x, std::span<const double> y);
double spearman(std::span<const double> x, std::span<const double> y);

// Paired bootstrap standard error of pearson(x, y1) - pearson(x, y2). All
// three sequences are resampled with the same indices.
double pearson_gap_standard_error(std::span<const double> x,
                                  std::span<const double> y1,
                                  std::span<const double> y2,
                                  std::size_t resamples, Rng& rng);

}  // namespace lde
