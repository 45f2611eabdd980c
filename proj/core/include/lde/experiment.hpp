#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "lde/comparison.hpp"

namespace lde {

// One comparison test: K policies with known true values, ranked by every
// configured method. reports[k] belongs to ExperimentResult::methods[k].
struct TestRecord {
  std::size_t test_id = 0;
  std::optional<double> alpha;  // synthetic sweeps only
  std::size_t m = 0;            // records per state (or per policy)
  std::vector<double> true_values;
  std::vector<ComparisonReport> reports;
};

struct ExperimentResult {
  std::vector<std::string> methods;
  std::vector<TestRecord> tests;
};

struct PairRow {
  std::size_t test_id = 0;
  std::optional<double> alpha;
  std::size_t m = 0;
  std::string method;
  std::size_t policy_i = 0;
  std::size_t policy_j = 0;
  double est_i = 0.0;
  double est_j = 0.0;
  double true_i = 0.0;
  double true_j = 0.0;
  bool correct = false;
};

std::vector<PairRow> pair_rows(const ExperimentResult& result);

struct AggregateRow {
  std::string method;
  std::optional<double> alpha;  // empty for drivers without an alpha axis
  bool pooled = false;          // true: pooled over every alpha at this m
  std::size_t m = 0;
  std::size_t tests = 0;
  double comparison_rate = 0.0;  // mean comparison score
  double score_std = 0.0;
  double mean_err = 0.0;         // NaN when no errors were recorded
  double std_err = 0.0;
  double pearson = 0.0;          // NaN when undefined
  double spearman = 0.0;
};

// Per-(alpha, m) aggregates in first-seen order, followed by one pooled row per
// m whenever that m was run at more than one alpha. Correlations are taken
// between the true and the estimated pairwise value differences, across every
// pair of every test in the group.
std::vector<AggregateRow> aggregate(const ExperimentResult& result);

// The two difference sequences used for the correlation statistics.
struct DifferenceSeries {
  std::vector<double> truth;
  std::vector<double> estimate;
};

DifferenceSeries difference_series(const std::vector<const TestRecord*>& tests,
                                   std::size_t method_index);

}  // namespace lde
