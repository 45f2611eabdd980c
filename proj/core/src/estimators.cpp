#include "lde/estimators.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <string>
#include <utility>

#include "lde/error.hpp"

namespace lde {
namespace {

constexpr double kMinBehaviorProb = 1e-12;

template <class... Fs>
struct Overloaded : Fs... {
  using Fs::operator()...;
};
template <class... Fs>
Overloaded(Fs...) -> Overloaded<Fs...>;

void require_records(std::span<const RecordTerms> terms) {
  if (terms.empty()) {
    throw Error(ErrorCode::kEmptyData, "estimator called on an empty dataset");
  }
}

void require_propensities(std::span<const RecordTerms> terms) {
  for (const auto& t : terms) {
    if (!(t.behavior_prob > kMinBehaviorProb)) {
      throw Error(ErrorCode::kDivisionGuard,
                  "behavior probability at or below 1e-12");
    }
  }
}

void check_records(const Dataset& data, const Policy& pi) {
  for (const auto& r : data.records()) {
    if (r.state >= pi.n_states() || r.action >= pi.n_actions()) {
      throw Error(ErrorCode::kDimension, "record index outside the policy table");
    }
  }
}

// Terms for the baseline-free estimators; baseline fields stay zero.
std::vector<RecordTerms> plain_terms(const Dataset& data, const Policy& pi) {
  check_records(data, pi);
  std::vector<RecordTerms> terms;
  terms.reserve(data.size());
  for (const auto& r : data.records()) {
    terms.push_back({r.reward, pi.prob(r.state, r.action), r.behavior_prob, 0.0, 0.0});
  }
  return terms;
}

}  // namespace

Baseline::Baseline(Storage values) : values_(std::move(values)) {}

Baseline Baseline::constant(double c) {
  if (!std::isfinite(c)) throw Error(ErrorCode::kInvalidArgument, "baseline not finite");
  return Baseline(Storage{c});
}

Baseline Baseline::per_state(Eigen::VectorXd values) {
  if (!values.allFinite()) throw Error(ErrorCode::kInvalidArgument, "baseline not finite");
  return Baseline(Storage{std::move(values)});
}

Baseline Baseline::table(Eigen::MatrixXd values) {
  if (!values.allFinite()) throw Error(ErrorCode::kInvalidArgument, "baseline not finite");
  return Baseline(Storage{std::move(values)});
}

Baseline::Kind Baseline::kind() const noexcept {
  return static_cast<Kind>(values_.index());
}

double Baseline::at(std::size_t s, std::size_t a) const {
  return std::visit(
      Overloaded{
          [](double c) { return c; },
          [s](const Eigen::VectorXd& v) { return v(static_cast<Eigen::Index>(s)); },
          [s, a](const Eigen::MatrixXd& m) {
            return m(static_cast<Eigen::Index>(s), static_cast<Eigen::Index>(a));
          },
      },
      values_);
}

double Baseline::expectation(std::size_t s, const Policy& pi) const {
  const auto row = static_cast<Eigen::Index>(s);
  return std::visit(
      Overloaded{
          [&](double c) { return c * pi.probs().row(row).sum(); },
          [&](const Eigen::VectorXd& v) { return v(row) * pi.probs().row(row).sum(); },
          [&](const Eigen::MatrixXd& m) { return m.row(row).dot(pi.probs().row(row)); },
      },
      values_);
}

double Baseline::state_level(std::size_t s) const {
  const auto row = static_cast<Eigen::Index>(s);
  return std::visit(Overloaded{
                        [](double c) { return c; },
                        [row](const Eigen::VectorXd& v) { return v(row); },
                        [row](const Eigen::MatrixXd& m) { return m.row(row).mean(); },
                    },
                    values_);
}

void Baseline::check_conforms(std::size_t n_states, std::size_t n_actions) const {
  const auto rows = static_cast<Eigen::Index>(n_states);
  const auto cols = static_cast<Eigen::Index>(n_actions);
  const bool ok = std::visit(
      Overloaded{
          [](double) { return true; },
          [rows](const Eigen::VectorXd& v) { return v.size() == rows; },
          [rows, cols](const Eigen::MatrixXd& m) {
            return m.rows() == rows && m.cols() == cols;
          },
      },
      values_);
  if (!ok) throw Error(ErrorCode::kDimension, "baseline shape does not match the grid");
}

Baseline baseline_from_data(const Dataset& data) {
  if (data.empty()) {
    throw Error(ErrorCode::kEmptyData, "cannot derive a baseline from no records");
  }
  double total = 0.0;
  for (const auto& r : data.records()) total += r.reward;
  return Baseline::constant(total / static_cast<double>(data.size()));
}

std::vector<RecordTerms> record_terms(const Dataset& data, const Policy& pi,
                                      std::size_t n_actions,
                                      const Baseline& baseline) {
  if (pi.n_actions() != n_actions) {
    throw Error(ErrorCode::kDimension, "policy action count differs from the env");
  }
  check_records(data, pi);
  baseline.check_conforms(pi.n_states(), n_actions);
  std::vector<RecordTerms> terms;
  terms.reserve(data.size());
  for (const auto& r : data.records()) {
    terms.push_back({r.reward, pi.prob(r.state, r.action), r.behavior_prob,
                     baseline.at(r.state, r.action),
                     baseline.expectation(r.state, pi)});
  }
  return terms;
}

double dim(std::span<const RecordTerms> terms) {
  require_records(terms);
  double total = 0.0;
  for (const auto& t : terms) total += t.reward * t.target_prob;
  return total / static_cast<double>(terms.size());
}

double ips(std::span<const RecordTerms> terms) {
  require_records(terms);
  require_propensities(terms);
  double total = 0.0;
  for (const auto& t : terms) total += t.reward * t.target_prob / t.behavior_prob;
  return total / static_cast<double>(terms.size());
}

double dre(std::span<const RecordTerms> terms) {
  require_records(terms);
  require_propensities(terms);
  double total = 0.0;
  for (const auto& t : terms) {
    total += (t.reward - t.baseline) * t.target_prob / t.behavior_prob +
             t.baseline_expectation;
  }
  return total / static_cast<double>(terms.size());
}

double lde(std::span<const RecordTerms> terms) {
  require_records(terms);
  double total = 0.0;
  for (const auto& t : terms) {
    total += (t.reward - t.baseline) * t.target_prob + t.baseline_expectation;
  }
  return total / static_cast<double>(terms.size());
}

double dim(const Dataset& data, const Policy& pi) {
  if (data.empty()) throw Error(ErrorCode::kEmptyData, "empty dataset");
  return dim(plain_terms(data, pi));
}

double ips(const Dataset& data, const Policy& pi) {
  if (data.empty()) throw Error(ErrorCode::kEmptyData, "empty dataset");
  return ips(plain_terms(data, pi));
}

double dre(const Dataset& data, const Policy& pi, std::size_t n_actions,
           const Baseline& baseline) {
  if (data.empty()) throw Error(ErrorCode::kEmptyData, "empty dataset");
  return dre(record_terms(data, pi, n_actions, baseline));
}

double lde(const Dataset& data, const Policy& pi, std::size_t n_actions,
           const Baseline& baseline) {
  if (data.empty()) throw Error(ErrorCode::kEmptyData, "empty dataset");
  return lde(record_terms(data, pi, n_actions, baseline));
}

std::string_view to_string(Estimator e) noexcept {
  switch (e) {
    case Estimator::kLde: return "LDE";
    case Estimator::kDre: return "DRE";
    case Estimator::kIps: return "IPS";
    case Estimator::kDim: return "DiM";
  }
  return "?";
}

std::optional<Estimator> parse_estimator(std::string_view name) noexcept {
  std::string lower(name);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (lower == "lde") return Estimator::kLde;
  if (lower == "dre") return Estimator::kDre;
  if (lower == "ips") return Estimator::kIps;
  if (lower == "dim") return Estimator::kDim;
  return std::nullopt;
}

const std::vector<Estimator>& all_estimators() {
  static const std::vector<Estimator> kAll = {Estimator::kLde, Estimator::kDre,
                                              Estimator::kIps, Estimator::kDim};
  return kAll;
}

double estimate(Estimator e, std::span<const RecordTerms> terms) {
  switch (e) {
    case Estimator::kLde: return lde(terms);
    case Estimator::kDre: return dre(terms);
    case Estimator::kIps: return ips(terms);
    case Estimator::kDim: return dim(terms);
  }
  throw Error(ErrorCode::kInvalidArgument, "unknown estimator");
}

NamedEstimator make_estimator(Estimator e) {
  return {std::string(to_string(e)), [e](const EstimateContext& ctx, const Policy& pi) {
            const auto terms =
                record_terms(ctx.data, pi, ctx.env.n_actions(), ctx.baseline);
            return estimate(e, terms);
          }};
}

std::vector<NamedEstimator> make_estimators(const std::vector<Estimator>& list) {
  std::vector<NamedEstimator> out;
  out.reserve(list.size());
  for (Estimator e : list) out.push_back(make_estimator(e));
  return out;
}

}  // namespace lde
