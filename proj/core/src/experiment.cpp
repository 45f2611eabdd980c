#include "lde/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>

#include "lde/error.hpp"
#include "lde/stats.hpp"

namespace lde {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double correlation_or_nan(double (*fn)(std::span<const double>, std::span<const double>),
                          const DifferenceSeries& series) {
  if (series.truth.size() < 2) return kNaN;
  try {
    return fn(series.truth, series.estimate);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kUndefinedCorrelation) return kNaN;
    throw;
  }
}

AggregateRow summarize(const ExperimentResult& result,
                       const std::vector<const TestRecord*>& group,
                       std::size_t method_index) {
  AggregateRow row;
  row.method = result.methods[method_index];
  row.tests = group.size();
  std::vector<double> scores;
  std::vector<double> errors;
  for (const TestRecord* t : group) {
    const auto& report = t->reports.at(method_index);
    scores.push_back(report.score);
    errors.insert(errors.end(), report.eval_errors.begin(), report.eval_errors.end());
  }
  row.comparison_rate = mean(scores);
  row.score_std = stddev(scores);
  row.mean_err = errors.empty() ? kNaN : mean(errors);
  row.std_err = errors.empty() ? kNaN : stddev(errors);
  const DifferenceSeries series = difference_series(group, method_index);
  row.pearson = correlation_or_nan(&pearson, series);
  row.spearman = correlation_or_nan(&spearman, series);
  return row;
}

}  // namespace

std::vector<PairRow> pair_rows(const ExperimentResult& result) {
  std::vector<PairRow> rows;
  for (const auto& test : result.tests) {
    for (std::size_t k = 0; k < test.reports.size(); ++k) {
      const auto& report = test.reports[k];
      const std::size_t n = report.policy_count();
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
          rows.push_back({test.test_id, test.alpha, test.m, result.methods[k], i, j,
                          report.estimates[i], report.estimates[j],
                          report.true_values[i], report.true_values[j],
                          report.correct(i, j)});
        }
      }
    }
  }
  return rows;
}

DifferenceSeries difference_series(const std::vector<const TestRecord*>& tests,
                                   std::size_t method_index) {
  DifferenceSeries series;
  for (const TestRecord* t : tests) {
    const auto& report = t->reports.at(method_index);
    const std::size_t n = report.policy_count();
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        series.truth.push_back(report.true_values[i] - report.true_values[j]);
        series.estimate.push_back(report.estimates[i] - report.estimates[j]);
      }
    }
  }
  return series;
}

std::vector<AggregateRow> aggregate(const ExperimentResult& result) {
  using Key = std::pair<std::optional<double>, std::size_t>;
  std::vector<Key> keys;
  std::vector<std::vector<const TestRecord*>> groups;
  for (const auto& test : result.tests) {
    const Key key{test.alpha, test.m};
    auto it = std::find(keys.begin(), keys.end(), key);
    if (it == keys.end()) {
      keys.push_back(key);
      groups.emplace_back();
      it = std::prev(keys.end());
    }
    groups[static_cast<std::size_t>(it - keys.begin())].push_back(&test);
  }

  std::vector<AggregateRow> rows;
  for (std::size_t g = 0; g < groups.size(); ++g) {
    for (std::size_t k = 0; k < result.methods.size(); ++k) {
      AggregateRow row = summarize(result, groups[g], k);
      row.alpha = keys[g].first;
      row.m = keys[g].second;
      rows.push_back(std::move(row));
    }
  }

  std::vector<std::size_t> ms;
  for (const auto& key : keys) {
    if (std::find(ms.begin(), ms.end(), key.second) == ms.end()) ms.push_back(key.second);
  }
  for (std::size_t m : ms) {
    std::vector<const TestRecord*> pooled;
    std::size_t alphas = 0;
    for (std::size_t g = 0; g < groups.size(); ++g) {
      if (keys[g].second != m || !keys[g].first) continue;
      ++alphas;
      pooled.insert(pooled.end(), groups[g].begin(), groups[g].end());
    }
    if (alphas < 2) continue;
    for (std::size_t k = 0; k < result.methods.size(); ++k) {
      AggregateRow row = summarize(result, pooled, k);
      row.pooled = true;
      row.m = m;
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

}  // namespace lde
