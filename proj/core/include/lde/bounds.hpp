#pragma once

#include <cstddef>
#include <vector>

#include "lde/env.hpp"
#include "lde/estimators.hpp"

namespace lde {

// Lower bound on the probability that the LDE orders two policies correctly,
// in the form stated with the dataset size and action count:
//   1 - exp(-N^2 gap^2 / (8 n^4 R^2)), clamped to [0, 1].
double comparison_bound(std::size_t n_records, std::size_t n_actions,
                      double value_gap, double radius);

// The same bound as it comes out of the Hoeffding argument with m historical
// actions per state: 1 - exp(-m^2 gap^2 / (8 n^2 R^2)).
double comparison_bound_dense(std::size_t m, std::size_t n_actions,
                            double value_gap, double radius);

// Upper bound on the chance that the per-state LDE product is <= -delta:
//   (1 + (delta + (m/n) gap_s^2) / (2 R^2))^-1.
double state_comparison_bound(double delta, std::size_t m, std::size_t n_actions,
                      double state_gap, double radius);

// R = max(max R - E_s[r_hat(s)], E_s[r_hat(s)] - min R) with the reward-space
// bounds read off the reward table. Throws kDegenerateRadius when R = 0.
double bound_radius(const EnvTable& env, const Baseline& baseline);

// Per-state variant with r_hat(s) in place of its expectation.
double state_bound_radius(const EnvTable& env, const Baseline& baseline,
                          std::size_t s);

// Bound values for one policy pair on one environment.
class BoundReport {
 public:
  BoundReport(const EnvTable& env, const Policy& pi, const Policy& mu,
              const Baseline& baseline, std::size_t m);

  double radius() const noexcept { return radius_; }
  double value_gap() const noexcept { return value_gap_; }
  double p_comp_lower() const noexcept { return p_comp_lower_; }
  double p_comp_lower_proof_form() const noexcept { return p_comp_lower_proof_; }
  double per_state_upper(double delta, std::size_t s) const;

 private:
  std::size_t m_;
  std::size_t n_actions_;
  double radius_;
  double value_gap_;
  double p_comp_lower_;
  double p_comp_lower_proof_;
  std::vector<double> state_gaps_;
  std::vector<double> state_radii_;
};

}  // namespace lde
