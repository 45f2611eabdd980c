#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "lde/env.hpp"

namespace lde {

// Reward surrogate r_hat(s, a) used to fill in unobserved state-action pairs.
// Model- or critic-based surrogates are supplied through the table variant.
class Baseline {
 public:
  enum class Kind { kConstant, kPerState, kTable };

  static Baseline constant(double c);
  static Baseline per_state(Eigen::VectorXd values);
  static Baseline table(Eigen::MatrixXd values);

  Kind kind() const noexcept;
  double at(std::size_t s, std::size_t a) const;
  // sum_a r_hat(s, a) pi(a | s)
  double expectation(std::size_t s, const Policy& pi) const;
  // Value at state s for baselines that do not depend on the action; the
  // table variant returns its row mean.
  double state_level(std::size_t s) const;

  // Throws kDimension if the stored shape does not match the grid.
  void check_conforms(std::size_t n_states, std::size_t n_actions) const;

 private:
  using Storage = std::variant<double, Eigen::VectorXd, Eigen::MatrixXd>;
  explicit Baseline(Storage values);

  Storage values_;
};

// Constant baseline equal to the mean observed reward.
Baseline baseline_from_data(const Dataset& data);

// Everything an estimator reads from one logged record. Tabular callers get
// these from record_terms(); the episode-log driver fills target_prob from
// the trajectory probability proxy instead.
struct RecordTerms {
  double reward = 0.0;
  double target_prob = 0.0;           // pi(a_n | s_n)
  double behavior_prob = 1.0;         // p_n
  double baseline = 0.0;              // r_hat(s_n, a_n)
  double baseline_expectation = 0.0;  // sum_a r_hat(s_n, a) pi(a | s_n)
};

std::vector<RecordTerms> record_terms(const Dataset& data, const Policy& pi,
                                      std::size_t n_actions,
                                      const Baseline& baseline);

double dim(std::span<const RecordTerms> terms);
double ips(std::span<const RecordTerms> terms);
double dre(std::span<const RecordTerms> terms);
double lde(std::span<const RecordTerms> terms);

// (1/N) sum r_n pi(a_n|s_n)
double dim(const Dataset& data, const Policy& pi);
// (1/N) sum r_n pi(a_n|s_n) / p_n
double ips(const Dataset& data, const Policy& pi);
// (1/N) sum [(r_n - r_hat(s_n,a_n)) pi(a_n|s_n) / p_n + sum_a r_hat(s_n,a) pi(a|s_n)]
double dre(const Dataset& data, const Policy& pi, std::size_t n_actions,
           const Baseline& baseline);
// (1/N) sum [(r_n - r_hat(s_n,a_n)) pi(a_n|s_n) + sum_a r_hat(s_n,a) pi(a|s_n)]
double lde(const Dataset& data, const Policy& pi, std::size_t n_actions,
           const Baseline& baseline);

enum class Estimator { kLde, kDre, kIps, kDim };

std::string_view to_string(Estimator e) noexcept;
std::optional<Estimator> parse_estimator(std::string_view name) noexcept;
const std::vector<Estimator>& all_estimators();

double estimate(Estimator e, std::span<const RecordTerms> terms);

// Inputs available to an estimator inside one test.
struct EstimateContext {
  const EnvTable& env;
  const Dataset& data;
  const Baseline& baseline;
};

struct NamedEstimator {
  std::string name;
  std::function<double(const EstimateContext&, const Policy&)> fn;
};

NamedEstimator make_estimator(Estimator e);
std::vector<NamedEstimator> make_estimators(const std::vector<Estimator>& list);

}  // namespace lde
