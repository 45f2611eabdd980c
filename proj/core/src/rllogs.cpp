#include "lde/rllogs.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include <nlohmann/json.hpp>

#include "lde/error.hpp"
#include "lde/random.hpp"

namespace lde {
namespace {

using nlohmann::json;

[[noreturn]] void schema_error(std::size_t line, const std::string& msg) {
  throw Error(ErrorCode::kSchema, "line " + std::to_string(line) + ": " + msg);
}

const json& field(const json& obj, const char* key, std::size_t line) {
  const auto it = obj.find(key);
  if (it == obj.end()) schema_error(line, std::string("missing field '") + key + "'");
  return *it;
}

Eigen::VectorXd read_vector(const json& j, const std::string& what, std::size_t line) {
  if (!j.is_array()) schema_error(line, what + " must be an array");
  Eigen::VectorXd v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number()) schema_error(line, what + " must hold numbers");
    v(static_cast<Eigen::Index>(i)) = j[i].get<double>();
    if (!std::isfinite(v(static_cast<Eigen::Index>(i)))) {
      schema_error(line, what + " must be finite");
    }
  }
  return v;
}

Eigen::MatrixXd read_matrix(const json& j, std::size_t cols, const std::string& what,
                            std::size_t line) {
  if (!j.is_array()) schema_error(line, what + " must be an array of rows");
  Eigen::MatrixXd m(static_cast<Eigen::Index>(j.size()), static_cast<Eigen::Index>(cols));
  for (std::size_t r = 0; r < j.size(); ++r) {
    const Eigen::VectorXd row = read_vector(j[r], what, line);
    if (static_cast<std::size_t>(row.size()) != cols) {
      schema_error(line, what + " row " + std::to_string(r) + " has wrong width");
    }
    m.row(static_cast<Eigen::Index>(r)) = row.transpose();
  }
  return m;
}

void check_bounds(const Eigen::MatrixXd& m, const Eigen::VectorXd& low,
                  const Eigen::VectorXd& high, const std::string& what, std::size_t line) {
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      if (m(r, c) < low(c) || m(r, c) > high(c)) {
        schema_error(line, what + " coordinate outside the action bounds at step " +
                               std::to_string(r));
      }
    }
  }
}

json matrix_json(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

json vector_json(const Eigen::VectorXd& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

EpisodeLog parse_line(const std::string& text, std::size_t line) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::kParse, "line " + std::to_string(line) + ": " + e.what());
  }
  if (!j.is_object()) schema_error(line, "episode must be a JSON object");

  EpisodeLog log;
  const json& id = field(j, "episode_id", line);
  const json& gen = field(j, "generator", line);
  if (!id.is_string() || !gen.is_string()) {
    schema_error(line, "episode_id and generator must be strings");
  }
  log.episode_id = id.get<std::string>();
  log.generator = gen.get<std::string>();
  log.action_low = read_vector(field(j, "action_low", line), "action_low", line);
  log.action_high = read_vector(field(j, "action_high", line), "action_high", line);
  const auto d = static_cast<std::size_t>(log.action_low.size());
  if (d == 0 || static_cast<std::size_t>(log.action_high.size()) != d) {
    schema_error(line, "action_low and action_high must share a positive length");
  }
  if (((log.action_high - log.action_low).array() <= 0.0).any()) {
    schema_error(line, "action_high must exceed action_low");
  }

  log.behavior_actions = read_matrix(field(j, "behavior_actions", line), d,
                                     "behavior_actions", line);
  log.rewards = read_vector(field(j, "rewards", line), "rewards", line);
  const Eigen::Index horizon = log.behavior_actions.rows();
  if (horizon < 1) schema_error(line, "episode must have at least one step");
  if (log.rewards.size() != horizon) schema_error(line, "rewards length differs from horizon");
  check_bounds(log.behavior_actions, log.action_low, log.action_high, "behavior_actions", line);

  const json& cands = field(j, "candidates", line);
  if (!cands.is_object() || cands.empty()) {
    schema_error(line, "candidates must be a non-empty object");
  }
  for (const auto& [name, value] : cands.items()) {
    Eigen::MatrixXd m = read_matrix(value, d, "candidate '" + name + "'", line);
    if (m.rows() != horizon) schema_error(line, "candidate '" + name + "' has wrong horizon");
    check_bounds(m, log.action_low, log.action_high, "candidate '" + name + "'", line);
    log.candidates.emplace(name, std::move(m));
  }

  const Eigen::Index keep = std::min<Eigen::Index>(horizon, kMaxHorizon);
  if (keep < horizon) {
    log.behavior_actions.conservativeResize(keep, Eigen::NoChange);
    log.rewards.conservativeResize(keep);
    for (auto& [name, m] : log.candidates) m.conservativeResize(keep, Eigen::NoChange);
  }
  return log;
}

}  // namespace

std::vector<EpisodeLog> parse_episode_logs(const std::string& text) {
  std::vector<EpisodeLog> logs;
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    logs.push_back(parse_line(line, line_no));
  }
  return logs;
}

std::vector<EpisodeLog> parse_episode_log(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_episode_logs(buf.str());
}

std::string episode_to_json_line(const EpisodeLog& log) {
  json cands = json::object();
  for (const auto& [name, m] : log.candidates) cands[name] = matrix_json(m);
  json j = {{"episode_id", log.episode_id},
            {"generator", log.generator},
            {"behavior_actions", matrix_json(log.behavior_actions)},
            {"rewards", vector_json(log.rewards)},
            {"candidates", std::move(cands)},
            {"action_low", vector_json(log.action_low)},
            {"action_high", vector_json(log.action_high)}};
  return j.dump();
}

double probability_proxy(const Eigen::MatrixXd& policy_actions,
                         const Eigen::MatrixXd& behavior_actions,
                         const Eigen::VectorXd& low, const Eigen::VectorXd& high) {
  if (policy_actions.rows() != behavior_actions.rows() ||
      policy_actions.cols() != behavior_actions.cols() ||
      low.size() != policy_actions.cols() || high.size() != low.size()) {
    throw Error(ErrorCode::kDimension, "proxy inputs do not conform");
  }
  if (((high - low).array() <= 0.0).any()) {
    throw Error(ErrorCode::kInvalidArgument, "action bounds are degenerate");
  }
  double proxy = 1.0;
  for (Eigen::Index t = 0; t < policy_actions.rows(); ++t) {
    double step = 0.0;
    for (Eigen::Index c = 0; c < policy_actions.cols(); ++c) {
      const double z = (policy_actions(t, c) - behavior_actions(t, c)) / (high(c) - low(c));
      if (std::abs(z) < 1.0) step += std::exp(1.0 - 1.0 / (1.0 - z * z));
    }
    proxy *= step / static_cast<double>(policy_actions.cols());
  }
  return proxy;
}

RlDataset episodes_to_dataset(const std::vector<EpisodeLog>& logs) {
  if (logs.empty()) throw Error(ErrorCode::kEmptyData, "no episodes");
  std::vector<std::string> names;
  for (const auto& [name, m] : logs.front().candidates) names.push_back(name);

  Eigen::MatrixXd proxies(static_cast<Eigen::Index>(logs.size()),
                          static_cast<Eigen::Index>(names.size()));
  std::vector<HistoricalRecord> records;
  records.reserve(logs.size());
  for (std::size_t n = 0; n < logs.size(); ++n) {
    const EpisodeLog& log = logs[n];
    if (log.candidates.size() != names.size()) {
      throw Error(ErrorCode::kSchema, "episode '" + log.episode_id + "' has a different candidate set");
    }
    for (std::size_t k = 0; k < names.size(); ++k) {
      const auto it = log.candidates.find(names[k]);
      if (it == log.candidates.end()) {
        throw Error(ErrorCode::kSchema,
                    "episode '" + log.episode_id + "' lacks candidate '" + names[k] + "'");
      }
      proxies(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(k)) =
          probability_proxy(it->second, log.behavior_actions, log.action_low, log.action_high);
    }
    const auto gen = std::find(names.begin(), names.end(), log.generator);
    if (gen == names.end()) {
      throw Error(ErrorCode::kSchema,
                  "episode '" + log.episode_id + "' names unknown generator '" + log.generator + "'");
    }
    const double p = proxies(static_cast<Eigen::Index>(n), gen - names.begin());
    records.push_back({n, 0, log.rewards.sum(), p});
  }
  return {Dataset(std::move(records), DedupMode::kKeepAll), std::move(names), std::move(proxies)};
}

std::vector<double> rl_estimates(const RlDataset& rl, Estimator method) {
  const Baseline baseline = baseline_from_data(rl.data);
  const double c = baseline.at(0, 0);
  const bool residual = method == Estimator::kLde || method == Estimator::kDre;
  std::vector<double> out;
  out.reserve(rl.policies.size());
  std::vector<RecordTerms> terms(rl.data.size());
  for (Eigen::Index k = 0; k < rl.proxies.cols(); ++k) {
    for (std::size_t n = 0; n < terms.size(); ++n) {
      const auto& rec = rl.data.records()[n];
      terms[n] = {rec.reward, rl.proxies(static_cast<Eigen::Index>(n), k), rec.behavior_prob,
                  residual ? c : 0.0, residual ? c : 0.0};
    }
    out.push_back(estimate(method, terms));
  }
  return out;
}

std::vector<ComparisonReport> run_rl_comparison(const std::vector<EpisodeLog>& logs,
                                                const std::map<std::string, double>& true_values,
                                                const std::vector<Estimator>& methods) {
  const RlDataset rl = episodes_to_dataset(logs);
  std::vector<double> truth;
  for (const auto& name : rl.policies) {
    const auto it = true_values.find(name);
    if (it == true_values.end()) {
      throw Error(ErrorCode::kSchema, "no true value for policy '" + name + "'");
    }
    truth.push_back(it->second);
  }
  std::vector<ComparisonReport> reports;
  for (Estimator e : methods) {
    reports.push_back(
        compare_policies(rl_estimates(rl, e), truth, std::nullopt, std::string(to_string(e))));
  }
  return reports;
}

ExperimentResult run_rllogs(const std::vector<LogSet>& sets, const std::vector<Estimator>& methods) {
  ExperimentResult result;
  for (Estimator e : methods) result.methods.emplace_back(to_string(e));
  for (const auto& set : sets) {
    std::map<std::string, std::vector<const EpisodeLog*>> by_generator;
    for (const auto& [name, value] : set.true_values) by_generator[name];
    for (const auto& log : set.logs) {
      const auto it = by_generator.find(log.generator);
      if (it == by_generator.end()) {
        throw Error(ErrorCode::kSchema, "log set '" + set.name + "': generator '" +
                                            log.generator + "' has no true value");
      }
      it->second.push_back(&log);
    }
    std::size_t tests = std::numeric_limits<std::size_t>::max();
    for (const auto& [name, eps] : by_generator) tests = std::min(tests, eps.size());
    for (std::size_t j = 0; j < tests; ++j) {
      std::vector<EpisodeLog> group;
      for (const auto& [name, eps] : by_generator) group.push_back(*eps[j]);
      TestRecord record;
      record.test_id = result.tests.size();
      record.m = 1;
      const auto reports = run_rl_comparison(group, set.true_values, methods);
      record.true_values = reports.empty() ? std::vector<double>{} : reports.front().true_values;
      record.reports = reports;
      result.tests.push_back(std::move(record));
    }
  }
  return result;
}

namespace {

struct LinearSystem {
  Eigen::MatrixXd a;
  Eigen::MatrixXd b;
  std::vector<Eigen::MatrixXd> gains;
};

Eigen::MatrixXd normal_matrix(Eigen::Index rows, Eigen::Index cols, double sd, Rng& rng) {
  std::normal_distribution<double> normal(0.0, sd);
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = normal(rng);
  }
  return m;
}

Eigen::VectorXd act(const Eigen::MatrixXd& gain, const Eigen::VectorXd& x) {
  return (gain * x).cwiseMax(-1.0).cwiseMin(1.0);
}

double step_reward(const Eigen::VectorXd& x, const Eigen::VectorXd& a) {
  return std::exp(-x.squaredNorm()) - 0.1 * a.squaredNorm() / static_cast<double>(a.size());
}

struct Rollout {
  std::vector<Eigen::VectorXd> states;
  Eigen::MatrixXd actions;
  Eigen::VectorXd rewards;
};

Rollout rollout(const LinearSystem& sys, std::size_t policy, std::size_t horizon, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  const auto ds = sys.a.rows();
  Eigen::VectorXd x(ds);
  for (Eigen::Index i = 0; i < ds; ++i) x(i) = normal(rng);
  Rollout out;
  out.actions.resize(static_cast<Eigen::Index>(horizon), sys.b.cols());
  out.rewards.resize(static_cast<Eigen::Index>(horizon));
  for (std::size_t t = 0; t < horizon; ++t) {
    const Eigen::VectorXd a = act(sys.gains[policy], x);
    out.states.push_back(x);
    out.actions.row(static_cast<Eigen::Index>(t)) = a.transpose();
    out.rewards(static_cast<Eigen::Index>(t)) = step_reward(x, a);
    Eigen::VectorXd noise(ds);
    for (Eigen::Index i = 0; i < ds; ++i) noise(i) = 0.1 * normal(rng);
    x = sys.a * x + sys.b * a + noise;
  }
  return out;
}

std::string policy_name(std::size_t k) { return "policy_" + std::to_string(k); }

}  // namespace

std::vector<LogSet> generate_log_sets(const GenLogsConfig& config) {
  if (config.policies < 2 || config.horizon < 1 || config.state_dim < 1 ||
      config.action_dim < 1 || config.value_rollouts < 1) {
    throw Error(ErrorCode::kInvalidArgument, "genlogs sizes must be positive, policies >= 2");
  }
  const auto ds = static_cast<Eigen::Index>(config.state_dim);
  const auto da = static_cast<Eigen::Index>(config.action_dim);
  std::vector<LogSet> sets(config.sets);

  parallel_for(config.sets, config.jobs, [&](std::size_t s) {
    Rng rng = stream_rng(config.seed, {s});
    LinearSystem sys;
    sys.a = 1.02 * Eigen::MatrixXd::Identity(ds, ds) + normal_matrix(ds, ds, 0.05, rng);
    sys.b = normal_matrix(ds, da, 0.5, rng);
    const Eigen::MatrixXd centre = -0.8 * sys.b.transpose();
    for (std::size_t k = 0; k < config.policies; ++k) {
      const double spread = 0.3 * static_cast<double>(k + 1) / static_cast<double>(config.policies);
      sys.gains.push_back(centre + normal_matrix(da, ds, spread, rng));
    }

    LogSet& set = sets[s];
    set.name = "set_" + std::to_string(s);
    for (std::size_t k = 0; k < config.policies; ++k) {
      Rng value_rng = stream_rng(config.seed, {s, 1, k});
      double total = 0.0;
      for (std::size_t r = 0; r < config.value_rollouts; ++r) {
        total += rollout(sys, k, config.horizon, value_rng).rewards.sum();
      }
      set.true_values[policy_name(k)] = total / static_cast<double>(config.value_rollouts);
    }

    const Eigen::VectorXd low = Eigen::VectorXd::Constant(da, -1.0);
    const Eigen::VectorXd high = Eigen::VectorXd::Constant(da, 1.0);
    for (std::size_t e = 0; e < config.episodes; ++e) {
      for (std::size_t k = 0; k < config.policies; ++k) {
        Rng ep_rng = stream_rng(config.seed, {s, 2, k, e});
        Rollout ro = rollout(sys, k, config.horizon, ep_rng);
        EpisodeLog log;
        log.episode_id = set.name + "/" + policy_name(k) + "/" + std::to_string(e);
        log.generator = policy_name(k);
        log.behavior_actions = ro.actions;
        log.rewards = ro.rewards;
        log.action_low = low;
        log.action_high = high;
        for (std::size_t c = 0; c < config.policies; ++c) {
          Eigen::MatrixXd m(static_cast<Eigen::Index>(config.horizon), da);
          for (std::size_t t = 0; t < config.horizon; ++t) {
            m.row(static_cast<Eigen::Index>(t)) = act(sys.gains[c], ro.states[t]).transpose();
          }
          log.candidates.emplace(policy_name(c), std::move(m));
        }
        set.logs.push_back(std::move(log));
      }
    }
  });
  return sets;
}

}  // namespace lde
