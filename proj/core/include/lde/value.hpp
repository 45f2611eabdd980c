#pragma once

#include <cstddef>

#include "lde/env.hpp"

namespace lde {

// Expected reward at state s: sum_a r(s, a) pi(a | s).
double state_value(const EnvTable& env, const Policy& pi, std::size_t s);

// Expected reward over the env's state distribution.
double value(const EnvTable& env, const Policy& pi);

struct ExtremePolicies {
  Policy optimal;   // greedy argmax per state
  Policy pessimal;  // greedy argmin per state
};

// Ties go to the lowest action index.
ExtremePolicies extreme_policies(const EnvTable& env);

struct ValueRange {
  double v_max = 0.0;
  double v_min = 0.0;

  double width() const noexcept { return v_max - v_min; }
};

ValueRange value_range(const EnvTable& env);

// alpha = (V(pi) - V(mu)) / (V_max - V_min). Throws kDegenerateRange when the
// optimal and pessimal values coincide.
double normalized_value_difference(const EnvTable& env, const Policy& pi,
                                   const Policy& mu);

}  // namespace lde
