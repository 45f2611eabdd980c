#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "lde/env.hpp"
#include "lde/estimators.hpp"
#include "lde/experiment.hpp"
#include "lde/random.hpp"

namespace lde {

struct LabeledDataset {
  Eigen::MatrixXd features;          // rows are examples
  std::vector<std::size_t> labels;   // dense indices in [0, class_count)
  std::size_t class_count = 0;
  std::vector<std::string> class_names;

  std::size_t size() const noexcept { return labels.size(); }
  LabeledDataset subset(const std::vector<std::size_t>& rows) const;
};

// Comma-separated with a header row. Every non-label column must be numeric;
// features are z-scored per column (constant columns become zero). Labels are
// mapped to dense indices in sorted order, numerically when all are numbers.
LabeledDataset load_csv_dataset(const std::filesystem::path& path,
                                const std::string& label_column);
LabeledDataset parse_csv_dataset(const std::string& text, const std::string& label_column);

// Disjoint halves (train gets the smaller half when the size is odd). Every
// class with at least two instances is present in both halves.
std::pair<LabeledDataset, LabeledDataset> split_train_test(const LabeledDataset& data,
                                                           Rng& rng);

struct LinearPolicy {
  Eigen::MatrixXd weights;  // K x (d + 1), last column is the bias

  Eigen::VectorXd scores(const Eigen::VectorXd& x) const;
  std::size_t predict(const Eigen::VectorXd& x) const;
  double accuracy(const LabeledDataset& data) const;
  // Softmax of the class scores at each row of `data`.
  Policy to_policy(const LabeledDataset& data) const;
};

struct DlmConfig {
  std::size_t epochs = 1000;
  double epsilon = 0.1;
  double subsample = 0.8;
  double eta0 = 0.1;
};

// Direct loss minimisation with 0/1 loss: y_aug maximises score + eps * loss
// and the weights move by eta_t (phi(x, y_pred) - phi(x, y_aug)),
// eta_t = eta0 / sqrt(t) with t the epoch number.
LinearPolicy dlm_train(const LabeledDataset& train, const DlmConfig& config, Rng& rng);

// States are the rows of `data`, actions the classes, reward 1{a = label}.
EnvTable classification_env(const LabeledDataset& data);

struct ClassifyConfig {
  std::size_t splits = 10;
  std::size_t repeats = 100;
  std::size_t policies = 10;
  DlmConfig dlm;
  std::vector<NamedEstimator> estimators = make_estimators(all_estimators());
  std::uint64_t seed = 0;
  unsigned jobs = 1;
};

// One test on a fixed split: trains the target policies, samples a behavior
// policy over the test rows, logs one action per test row and compares.
TestRecord run_classification_test(const LabeledDataset& train, const LabeledDataset& test,
                                   const ClassifyConfig& config, Rng& rng);

// splits x repeats tests. Split i draws from stream {0, i}; repeat j of split
// i draws from stream {1, i, j}.
ExperimentResult run_classification(const LabeledDataset& data, const ClassifyConfig& config);

}  // namespace lde
