#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "lde/env.hpp"
#include "lde/estimators.hpp"
#include "lde/value.hpp"

namespace lde {

// Outcome of ranking K policies by estimated value against their true values.
struct ComparisonReport {
  std::string method;
  std::vector<double> estimates;
  std::vector<double> true_values;
  // Upper triangle, row-major: (0,1), (0,2), ..., (K-2,K-1).
  std::vector<bool> pairwise_correct;
  std::size_t incorrect_pairs = 0;
  double score = 0.0;
  // (estimate - true) / (V_max - V_min); empty when no range was supplied.
  std::vector<double> eval_errors;

  std::size_t policy_count() const noexcept { return estimates.size(); }
  std::size_t pair_count() const noexcept { return pairwise_correct.size(); }
  bool correct(std::size_t i, std::size_t j) const;
};

// Position of pair (i, j), i < j, in the upper-triangle layout.
std::size_t pair_index(std::size_t i, std::size_t j, std::size_t k);

// A pair is correct iff the estimates are strictly ordered the same way as the
// true values; tied estimates count as incorrect. Equal true values make the
// pair ill-posed and raise kIllPosedPair.
ComparisonReport compare_policies(std::span<const double> estimates,
                                  std::span<const double> true_values,
                                  std::optional<ValueRange> range = std::nullopt,
                                  std::string method = {});

double eval_error(double estimate, double true_value, double v_max, double v_min);

// (V_LDE(pi|s) - V_LDE(mu|s)) * (V(pi|s) - V(mu|s)), where the LDE per-state
// difference sums (r - r_hat)(pi - mu) over the records logged at s and adds
// sum_a r_hat(s, a)(pi - mu)(a|s). The second term vanishes for baselines that
// are constant in the action.
double per_state_product(const EnvTable& env, const Policy& pi, const Policy& mu,
                         const Dataset& data, const Baseline& baseline,
                         std::size_t s);

}  // namespace lde
