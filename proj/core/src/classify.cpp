#include "lde/classify.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <numeric>
#include <sstream>

#include "lde/comparison.hpp"
#include "lde/error.hpp"
#include "lde/value.hpp"

namespace lde {
namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    out.push_back(trim(std::string_view(line).substr(
        start, comma == std::string::npos ? std::string::npos : comma - start)));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

bool parse_double(const std::string& s, double& out) {
  if (s.empty()) return false;
  const char* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, out);
  return ec == std::errc() && ptr == end && std::isfinite(out);
}

Eigen::VectorXd augmented(const Eigen::MatrixXd& features, Eigen::Index row) {
  Eigen::VectorXd x(features.cols() + 1);
  x.head(features.cols()) = features.row(row).transpose();
  x(features.cols()) = 1.0;
  return x;
}

std::size_t argmax(const Eigen::VectorXd& v) {
  Eigen::Index best = 0;
  v.maxCoeff(&best);
  return static_cast<std::size_t>(best);
}

Policy sample_behavior(std::size_t n_states, std::size_t n_actions, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::MatrixXd probs(static_cast<Eigen::Index>(n_states),
                        static_cast<Eigen::Index>(n_actions));
  for (Eigen::Index s = 0; s < probs.rows(); ++s) {
    for (Eigen::Index a = 0; a < probs.cols(); ++a) probs(s, a) = normal(rng);
    probs.row(s).array() -= probs.row(s).maxCoeff();
    probs.row(s) = probs.row(s).array().exp().matrix();
    probs.row(s) /= probs.row(s).sum();
  }
  return Policy(std::move(probs));
}

}  // namespace

LabeledDataset LabeledDataset::subset(const std::vector<std::size_t>& rows) const {
  LabeledDataset out;
  out.features.resize(static_cast<Eigen::Index>(rows.size()), features.cols());
  out.labels.reserve(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    out.features.row(static_cast<Eigen::Index>(i)) =
        features.row(static_cast<Eigen::Index>(rows[i]));
    out.labels.push_back(labels[rows[i]]);
  }
  out.class_count = class_count;
  out.class_names = class_names;
  return out;
}

LabeledDataset parse_csv_dataset(const std::string& text, const std::string& label_column) {
  std::istringstream in(text);
  std::string line;
  std::vector<std::string> header;
  while (std::getline(in, line)) {
    if (!trim(line).empty()) {
      header = split_fields(line);
      break;
    }
  }
  if (header.empty()) throw Error(ErrorCode::kParse, "missing header row");
  const auto label_it = std::find(header.begin(), header.end(), label_column);
  if (label_it == header.end()) {
    throw Error(ErrorCode::kSchema, "label column '" + label_column + "' not found");
  }
  const auto label_idx = static_cast<std::size_t>(label_it - header.begin());
  const std::size_t d = header.size() - 1;

  std::vector<std::vector<double>> rows;
  std::vector<std::string> raw_labels;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto fields = split_fields(line);
    if (fields.size() != header.size()) {
      throw Error(ErrorCode::kParse, "line " + std::to_string(line_no) + ": expected " +
                                         std::to_string(header.size()) + " fields");
    }
    std::vector<double> row;
    row.reserve(d);
    for (std::size_t c = 0; c < fields.size(); ++c) {
      if (c == label_idx) continue;
      double v = 0.0;
      if (!parse_double(fields[c], v)) {
        throw Error(ErrorCode::kParse, "line " + std::to_string(line_no) + ": column '" +
                                           header[c] + "' is not a number");
      }
      row.push_back(v);
    }
    if (fields[label_idx].empty()) {
      throw Error(ErrorCode::kParse, "line " + std::to_string(line_no) + ": empty label");
    }
    rows.push_back(std::move(row));
    raw_labels.push_back(fields[label_idx]);
  }
  if (rows.size() < 2) throw Error(ErrorCode::kEmptyData, "need at least two rows");

  std::vector<std::string> names = raw_labels;
  std::sort(names.begin(), names.end());
  names.erase(std::unique(names.begin(), names.end()), names.end());
  if (names.size() < 2) throw Error(ErrorCode::kInvalidArgument, "only one class present");
  const bool numeric = std::all_of(names.begin(), names.end(), [](const std::string& s) {
    double v = 0.0;
    return parse_double(s, v);
  });
  if (numeric) {
    std::stable_sort(names.begin(), names.end(), [](const std::string& a, const std::string& b) {
      return std::stod(a) < std::stod(b);
    });
  }
  std::map<std::string, std::size_t> index;
  for (std::size_t k = 0; k < names.size(); ++k) index[names[k]] = k;

  LabeledDataset out;
  out.features.resize(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(d));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t c = 0; c < d; ++c) {
      out.features(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(c)) = rows[i][c];
    }
    out.labels.push_back(index.at(raw_labels[i]));
  }
  for (Eigen::Index c = 0; c < out.features.cols(); ++c) {
    auto col = out.features.col(c);
    const double mu = col.mean();
    const double sd = std::sqrt((col.array() - mu).square().mean());
    if (sd > 0.0) {
      col = ((col.array() - mu) / sd).matrix();
    } else {
      col.setZero();
    }
  }
  out.class_count = names.size();
  out.class_names = std::move(names);
  return out;
}

LabeledDataset load_csv_dataset(const std::filesystem::path& path,
                                const std::string& label_column) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_csv_dataset(buf.str(), label_column);
}

std::pair<LabeledDataset, LabeledDataset> split_train_test(const LabeledDataset& data,
                                                           Rng& rng) {
  const std::size_t n = data.size();
  if (n < 2) throw Error(ErrorCode::kEmptyData, "need at least two rows to split");
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);
  std::vector<std::size_t> halves[2] = {
      {order.begin(), order.begin() + static_cast<std::ptrdiff_t>(n / 2)},
      {order.begin() + static_cast<std::ptrdiff_t>(n / 2), order.end()}};

  auto counts = [&](const std::vector<std::size_t>& half) {
    std::vector<std::size_t> c(data.class_count, 0);
    for (std::size_t i : half) ++c[data.labels[i]];
    return c;
  };
  for (std::size_t k = 0; k < data.class_count; ++k) {
    for (int h = 0; h < 2; ++h) {
      auto& missing = halves[h];
      auto& other = halves[1 - h];
      const auto have = counts(missing);
      const auto spare = counts(other);
      if (have[k] > 0 || spare[k] < 2) continue;
      // Trade one instance of k for a row whose class the missing half can spare.
      const auto from = std::find_if(other.begin(), other.end(),
                                     [&](std::size_t i) { return data.labels[i] == k; });
      const auto to = std::find_if(missing.begin(), missing.end(), [&](std::size_t i) {
        return have[data.labels[i]] >= 2 || spare[data.labels[i]] == 0;
      });
      if (to == missing.end()) continue;
      std::iter_swap(from, to);
    }
  }
  return {data.subset(halves[0]), data.subset(halves[1])};
}

Eigen::VectorXd LinearPolicy::scores(const Eigen::VectorXd& x) const {
  return weights * x;
}

std::size_t LinearPolicy::predict(const Eigen::VectorXd& x) const { return argmax(scores(x)); }

double LinearPolicy::accuracy(const LabeledDataset& data) const {
  if (data.size() == 0) return 0.0;
  std::size_t hits = 0;
  for (std::size_t i = 0; i < data.size(); ++i) {
    hits += predict(augmented(data.features, static_cast<Eigen::Index>(i))) == data.labels[i];
  }
  return static_cast<double>(hits) / static_cast<double>(data.size());
}

Policy LinearPolicy::to_policy(const LabeledDataset& data) const {
  Eigen::MatrixXd probs(static_cast<Eigen::Index>(data.size()), weights.rows());
  for (Eigen::Index i = 0; i < probs.rows(); ++i) {
    Eigen::VectorXd z = scores(augmented(data.features, i));
    z.array() -= z.maxCoeff();
    z = z.array().exp().matrix();
    probs.row(i) = (z / z.sum()).transpose();
  }
  return Policy(std::move(probs));
}

LinearPolicy dlm_train(const LabeledDataset& train, const DlmConfig& config, Rng& rng) {
  if (train.size() == 0) throw Error(ErrorCode::kEmptyData, "empty training set");
  if (!(config.subsample > 0.0 && config.subsample <= 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "subsample must lie in (0, 1]");
  }
  const auto d = train.features.cols();
  LinearPolicy policy{Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(train.class_count), d + 1)};

  std::vector<std::size_t> rows(train.size());
  std::iota(rows.begin(), rows.end(), 0);
  std::shuffle(rows.begin(), rows.end(), rng);
  const auto keep = std::max<std::size_t>(
      1, static_cast<std::size_t>(std::floor(config.subsample * static_cast<double>(rows.size()))));
  rows.resize(keep);

  for (std::size_t epoch = 1; epoch <= config.epochs; ++epoch) {
    const double eta = config.eta0 / std::sqrt(static_cast<double>(epoch));
    std::shuffle(rows.begin(), rows.end(), rng);
    for (std::size_t i : rows) {
      const Eigen::VectorXd x = augmented(train.features, static_cast<Eigen::Index>(i));
      Eigen::VectorXd s = policy.scores(x);
      const std::size_t y_pred = argmax(s);
      s.array() += config.epsilon;
      s(static_cast<Eigen::Index>(train.labels[i])) -= config.epsilon;
      const std::size_t y_aug = argmax(s);
      if (y_pred == y_aug) continue;
      policy.weights.row(static_cast<Eigen::Index>(y_pred)) += eta * x.transpose();
      policy.weights.row(static_cast<Eigen::Index>(y_aug)) -= eta * x.transpose();
    }
  }
  return policy;
}

EnvTable classification_env(const LabeledDataset& data) {
  Eigen::MatrixXd rewards = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(data.size()),
                                                  static_cast<Eigen::Index>(data.class_count));
  for (std::size_t i = 0; i < data.size(); ++i) {
    rewards(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(data.labels[i])) = 1.0;
  }
  return EnvTable::from_rewards(std::move(rewards));
}

TestRecord run_classification_test(const LabeledDataset& train, const LabeledDataset& test,
                                   const ClassifyConfig& config, Rng& rng) {
  const EnvTable env = classification_env(test);
  std::vector<Policy> targets;
  targets.reserve(config.policies);
  std::vector<double> truth;
  for (std::size_t k = 0; k < config.policies; ++k) {
    targets.push_back(dlm_train(train, config.dlm, rng).to_policy(test));
    truth.push_back(value(env, targets.back()));
  }

  const Policy behavior = sample_behavior(env.n_states(), env.n_actions(), rng);
  std::vector<HistoricalRecord> records;
  records.reserve(env.n_states());
  std::vector<double> weights(env.n_actions());
  for (std::size_t s = 0; s < env.n_states(); ++s) {
    for (std::size_t a = 0; a < env.n_actions(); ++a) weights[a] = behavior.prob(s, a);
    std::discrete_distribution<std::size_t> draw(weights.begin(), weights.end());
    const std::size_t a = draw(rng);
    records.push_back({s, a, env.reward(s, a), behavior.prob(s, a)});
  }
  const Dataset data(std::move(records), DedupMode::kKeepAll);
  const Baseline baseline = baseline_from_data(data);
  const ValueRange range = value_range(env);

  TestRecord record;
  record.m = 1;
  record.true_values = truth;
  const EstimateContext ctx{env, data, baseline};
  for (const auto& est : config.estimators) {
    std::vector<double> estimates;
    estimates.reserve(targets.size());
    for (const auto& pi : targets) estimates.push_back(est.fn(ctx, pi));
    record.reports.push_back(compare_policies(estimates, truth, range, est.name));
  }
  return record;
}

ExperimentResult run_classification(const LabeledDataset& data, const ClassifyConfig& config) {
  ExperimentResult result;
  for (const auto& e : config.estimators) result.methods.push_back(e.name);
  const std::size_t total = config.splits * config.repeats;
  if (total == 0) return result;

  std::vector<std::pair<LabeledDataset, LabeledDataset>> splits;
  splits.reserve(config.splits);
  for (std::size_t i = 0; i < config.splits; ++i) {
    Rng rng = stream_rng(config.seed, {0, i});
    splits.push_back(split_train_test(data, rng));
  }

  result.tests.resize(total);
  parallel_for(total, config.jobs, [&](std::size_t index) {
    const std::size_t i = index / config.repeats;
    const std::size_t j = index % config.repeats;
    Rng rng = stream_rng(config.seed, {1, i, j});
    TestRecord record = run_classification_test(splits[i].first, splits[i].second, config, rng);
    record.test_id = index;
    result.tests[index] = std::move(record);
  });
  return result;
}

}  // namespace lde
