#include "lde/comparison.hpp"

#include <sstream>
#include <utility>

#include "lde/error.hpp"

namespace lde {

std::size_t pair_index(std::size_t i, std::size_t j, std::size_t k) {
  // Pairs preceding row i: (k-1) + (k-2) + ... + (k-i).
  return i * k - i * (i + 1) / 2 + (j - i - 1);
}

bool ComparisonReport::correct(std::size_t i, std::size_t j) const {
  if (i == j || i >= policy_count() || j >= policy_count()) {
    throw Error(ErrorCode::kInvalidArgument, "invalid policy pair");
  }
  if (i > j) std::swap(i, j);
  return pairwise_correct[pair_index(i, j, policy_count())];
}

ComparisonReport compare_policies(std::span<const double> estimates,
                                  std::span<const double> true_values,
                                  std::optional<ValueRange> range,
                                  std::string method) {
  const std::size_t k = estimates.size();
  if (k != true_values.size()) {
    throw Error(ErrorCode::kDimension, "estimate and true value counts differ");
  }
  if (k < 2) {
    throw Error(ErrorCode::kInvalidArgument, "comparison needs at least two policies");
  }

  ComparisonReport report;
  report.method = std::move(method);
  report.estimates.assign(estimates.begin(), estimates.end());
  report.true_values.assign(true_values.begin(), true_values.end());
  report.pairwise_correct.reserve(k * (k - 1) / 2);

  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = i + 1; j < k; ++j) {
      const double truth = true_values[i] - true_values[j];
      if (truth == 0.0) {
        std::ostringstream msg;
        msg << "policies " << i << " and " << j << " have equal true values";
        throw Error(ErrorCode::kIllPosedPair, msg.str());
      }
      const double guess = estimates[i] - estimates[j];
      const bool ok = guess != 0.0 && ((guess > 0.0) == (truth > 0.0));
      report.pairwise_correct.push_back(ok);
      if (!ok) ++report.incorrect_pairs;
    }
  }
  report.score = 1.0 - static_cast<double>(report.incorrect_pairs) /
                           static_cast<double>(report.pairwise_correct.size());

  if (range) {
    report.eval_errors.reserve(k);
    for (std::size_t i = 0; i < k; ++i) {
      report.eval_errors.push_back(
          eval_error(estimates[i], true_values[i], range->v_max, range->v_min));
    }
  }
  return report;
}

double eval_error(double estimate, double true_value, double v_max, double v_min) {
  if (!(v_max > v_min)) {
    throw Error(ErrorCode::kDegenerateRange, "normalization range is empty");
  }
  return (estimate - true_value) / (v_max - v_min);
}

double per_state_product(const EnvTable& env, const Policy& pi, const Policy& mu,
                         const Dataset& data, const Baseline& baseline,
                         std::size_t s) {
  check_conforms(env, pi);
  check_conforms(env, mu);
  baseline.check_conforms(env.n_states(), env.n_actions());
  if (s >= env.n_states()) {
    throw Error(ErrorCode::kDimension, "state index out of range");
  }

  double residual = 0.0;
  std::size_t observed = 0;
  for (const auto& r : data.records()) {
    if (r.state != s) continue;
    if (r.action >= env.n_actions()) {
      throw Error(ErrorCode::kDimension, "record action out of range");
    }
    residual += (r.reward - baseline.at(s, r.action)) *
                (pi.prob(s, r.action) - mu.prob(s, r.action));
    ++observed;
  }
  if (observed == 0) {
    std::ostringstream msg;
    msg << "state " << s << " has no logged records";
    throw Error(ErrorCode::kNoDataForState, msg.str());
  }

  const double lde_diff =
      residual + baseline.expectation(s, pi) - baseline.expectation(s, mu);
  const double true_diff = state_value(env, pi, s) - state_value(env, mu, s);
  return lde_diff * true_diff;
}

}  // namespace lde
