#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "lde/estimators.hpp"
#include "lde/synth.hpp"

namespace lde::cli {

struct SynthSection {
  RewardKind env = RewardKind::kEx11;
  std::size_t n_states = 100;
  std::size_t n_actions = 100;
  std::vector<double> alphas = {0.05, 0.10, 0.15, 0.20, 0.25};
  std::vector<std::size_t> ms = {1};
  std::size_t tests = 1000;
  std::vector<Estimator> estimators = all_estimators();
};

struct ClassifySection {
  std::filesystem::path dataset;  // required by the classify subcommand
  std::string label_column = "label";
  std::size_t splits = 10;
  std::size_t repeats = 100;
  std::size_t policies = 10;
  std::size_t epochs = 1000;
  double epsilon = 0.1;
  double subsample = 0.8;
  double eta0 = 0.1;
  std::vector<Estimator> estimators = all_estimators();
};

struct LogSetSource {
  std::string name;
  std::filesystem::path logs;
  std::filesystem::path true_values;
};

struct RllogsSection {
  std::vector<LogSetSource> log_sets;  // required by the rllogs subcommand
  std::vector<Estimator> estimators = all_estimators();
};

struct VerifySection {
  std::size_t n_states = 4;
  std::size_t n_actions = 3;
  std::size_t pairs = 10;
  std::vector<std::size_t> ms = {1, 2, 3};
  std::vector<double> deltas = {0.01, 0.1, 0.5};
  std::size_t resamples = 10000;
};

struct BoundsSection {
  std::size_t total_records = 10;  // N
  std::size_t n_actions = 2;       // n
  double gap = 0.4;
  double radius = 1.0;             // R
  std::optional<std::size_t> m;    // adds the proof form when present
  std::optional<VerifySection> verify;
};

struct GenlogsSection {
  std::size_t sets = 15;
  std::size_t policies = 5;
  std::size_t episodes = 15;
  std::size_t horizon = 100;
  std::size_t state_dim = 3;
  std::size_t action_dim = 2;
  std::size_t value_rollouts = 400;
};

struct Config {
  std::filesystem::path source;  // file the config was read from
  std::string text;              // raw bytes, hashed into the manifest
  std::uint64_t seed = 0;
  std::optional<unsigned> jobs;
  std::optional<std::filesystem::path> output_dir;
  SynthSection synth;
  ClassifySection classify;
  RllogsSection rllogs;
  BoundsSection bounds;
  GenlogsSection genlogs;
};

// Strict JSON. Unknown or duplicate keys and out-of-range values raise
// lde::Error with the offending field path. Input paths are resolved against
// the directory holding the config file.
Config parse_config(const std::string& text, const std::filesystem::path& base_dir);
Config load_config(const std::filesystem::path& path);

std::uint64_t fnv1a64(const std::string& bytes) noexcept;

}  // namespace lde::cli
