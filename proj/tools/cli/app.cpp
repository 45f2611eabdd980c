#include "cli/app.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "cli/config.hpp"
#include "cli/report.hpp"
#include "lde/bounds.hpp"
#include "lde/classify.hpp"
#include "lde/error.hpp"
#include "lde/rllogs.hpp"
#include "lde/synth.hpp"
#include "lde/verify.hpp"

namespace lde::cli {
namespace {

struct Flags {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  std::optional<unsigned> jobs;
};

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Run {
  Config cfg;
  std::filesystem::path out_dir;
  unsigned jobs = 1;
  std::vector<std::string> files;
};

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::map<std::string, double> read_true_values(const std::filesystem::path& path) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(read_text(path));
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::kParse, path.string() + ": " + e.what());
  }
  if (!j.is_object()) throw Error(ErrorCode::kSchema, path.string() + ": expected an object");
  std::map<std::string, double> values;
  for (const auto& [name, v] : j.items()) {
    if (!v.is_number()) {
      throw Error(ErrorCode::kSchema, path.string() + ": value of '" + name + "' is not a number");
    }
    values[name] = v.get<double>();
  }
  return values;
}

void run_experiment(Run& run, const ExperimentResult& result, std::ostream& out) {
  const auto files = emit_reports(result, run.out_dir);
  run.files.insert(run.files.end(), files.begin(), files.end());
  print_summary(aggregate(result), out);
}

void run_synth(Run& run, std::ostream& out) {
  const SynthSection& s = run.cfg.synth;
  SweepConfig sweep;
  sweep.kind = s.env;
  sweep.n_states = s.n_states;
  sweep.n_actions = s.n_actions;
  sweep.alphas = s.alphas;
  sweep.ms = s.ms;
  sweep.tests = s.tests;
  sweep.estimators = make_estimators(s.estimators);
  sweep.seed = run.cfg.seed;
  sweep.jobs = run.jobs;
  run_experiment(run, run_sweep(sweep), out);
}

void run_classify(Run& run, std::ostream& out) {
  const ClassifySection& s = run.cfg.classify;
  if (s.dataset.empty()) throw ConfigError("classify.dataset: required");
  const LabeledDataset data = load_csv_dataset(s.dataset, s.label_column);
  ClassifyConfig cc;
  cc.splits = s.splits;
  cc.repeats = s.repeats;
  cc.policies = s.policies;
  cc.dlm = {s.epochs, s.epsilon, s.subsample, s.eta0};
  cc.estimators = make_estimators(s.estimators);
  cc.seed = run.cfg.seed;
  cc.jobs = run.jobs;
  run_experiment(run, run_classification(data, cc), out);
}

void run_rl(Run& run, std::ostream& out) {
  const RllogsSection& s = run.cfg.rllogs;
  if (s.log_sets.empty()) throw ConfigError("rllogs.log_sets: required");
  std::vector<LogSet> sets;
  for (const auto& src : s.log_sets) {
    sets.push_back({src.name, parse_episode_log(src.logs), read_true_values(src.true_values)});
  }
  run_experiment(run, run_rllogs(sets, s.estimators), out);
}

void run_bounds(Run& run, std::ostream& out) {
  const BoundsSection& b = run.cfg.bounds;
  char line[128];
  std::snprintf(line, sizeof line, "p_comp_lower %.5f\n",
                comparison_bound(b.total_records, b.n_actions, b.gap, b.radius));
  out << line;
  if (b.m) {
    std::snprintf(line, sizeof line, "p_comp_lower_proof_form %.5f\n",
                  comparison_bound_dense(*b.m, b.n_actions, b.gap, b.radius));
    out << line;
  }
  if (!b.verify) return;
  BoundCheckConfig bc;
  bc.n_states = b.verify->n_states;
  bc.n_actions = b.verify->n_actions;
  bc.pairs = b.verify->pairs;
  bc.ms = b.verify->ms;
  bc.deltas = b.verify->deltas;
  bc.resamples = b.verify->resamples;
  bc.seed = run.cfg.seed;
  bc.jobs = run.jobs;
  const auto rows = verify_bounds(bc);
  std::ostringstream csv;
  write_bounds_csv(rows, csv);
  write_file(run.out_dir / "bounds.csv", csv.str());
  run.files.push_back("bounds.csv");
  std::size_t violated = 0;
  for (const auto& r : rows) violated += r.violated;
  std::snprintf(line, sizeof line, "bound checks %zu, violations %zu\n", rows.size(), violated);
  out << line;
}

void run_genlogs(Run& run, std::ostream& out) {
  const GenlogsSection& g = run.cfg.genlogs;
  GenLogsConfig gc;
  gc.sets = g.sets;
  gc.policies = g.policies;
  gc.episodes = g.episodes;
  gc.horizon = g.horizon;
  gc.state_dim = g.state_dim;
  gc.action_dim = g.action_dim;
  gc.value_rollouts = g.value_rollouts;
  gc.seed = run.cfg.seed;
  gc.jobs = run.jobs;
  const auto sets = generate_log_sets(gc);

  nlohmann::ordered_json log_sets = nlohmann::ordered_json::array();
  for (const auto& set : sets) {
    std::string lines;
    for (const auto& log : set.logs) lines += episode_to_json_line(log) + "\n";
    const std::string logs_file = "logs/" + set.name + ".jsonl";
    const std::string values_file = "logs/" + set.name + "_values.json";
    nlohmann::ordered_json values = nlohmann::ordered_json::object();
    for (const auto& [name, v] : set.true_values) values[name] = v;
    write_file(run.out_dir / logs_file, lines);
    write_file(run.out_dir / values_file, values.dump(2) + "\n");
    run.files.push_back(logs_file);
    run.files.push_back(values_file);
    log_sets.push_back({{"name", set.name}, {"logs", logs_file}, {"true_values", values_file}});
  }
  const nlohmann::ordered_json config = {{"seed", run.cfg.seed},
                                         {"rllogs", {{"log_sets", log_sets}}}};
  write_file(run.out_dir / "rllogs.json", config.dump(2) + "\n");
  run.files.push_back("rllogs.json");
  out << "wrote " << sets.size() << " log sets to " << run.out_dir.string() << '\n';
}

void add_flags(CLI::App* sub, Flags& flags) {
  sub->add_option("--config", flags.config, "JSON configuration file")->required();
  sub->add_option("--seed", flags.seed, "Master seed, overrides the config");
  sub->add_option("--out", flags.out, "Output directory");
  sub->add_option("--jobs", flags.jobs, "Worker threads")->check(CLI::PositiveNumber);
}

}  // namespace

int run_app(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Policy comparison with limited logged data"};
  app.set_version_flag("--version", std::string(LDE_VERSION));
  app.require_subcommand(1);
  Flags flags;
  const char* names[] = {"synth", "classify", "rllogs", "bounds", "genlogs"};
  const char* help[] = {"Synthetic bandit sweep over alpha and m",
                        "Classification datasets as contextual bandits",
                        "Policy comparison from episode logs",
                        "Comparison bounds, optionally checked by Monte Carlo",
                        "Generate synthetic episode logs"};
  for (int i = 0; i < 5; ++i) add_flags(app.add_subcommand(names[i], help[i]), flags);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    std::ostringstream o, e2;
    const int code = app.exit(e, o, e2);
    out << o.str();
    err << e2.str();
    return code == 0 ? 0 : 2;
  }
  const std::string sub = app.get_subcommands().front()->get_name();

  Run run;
  try {
    run.cfg = load_config(flags.config);
  } catch (const Error& e) {
    err << "lde: " << e.what() << '\n';
    return 2;
  }
  if (flags.seed) run.cfg.seed = *flags.seed;
  run.jobs = flags.jobs.value_or(run.cfg.jobs.value_or(1));
  if (flags.out) {
    run.out_dir = *flags.out;
  } else if (const char* env = std::getenv("LDE_OUTPUT_DIR"); env && *env) {
    run.out_dir = env;
  } else {
    run.out_dir = run.cfg.output_dir.value_or("lde-out");
  }

  try {
    if (sub == "synth") {
      run_synth(run, out);
    } else if (sub == "classify") {
      run_classify(run, out);
    } else if (sub == "rllogs") {
      run_rl(run, out);
    } else if (sub == "bounds") {
      run_bounds(run, out);
    } else {
      run_genlogs(run, out);
    }
    std::ostringstream manifest;
    write_manifest({sub, run.cfg.seed, fnv1a64(run.cfg.text), run.files}, manifest);
    write_file(run.out_dir / "manifest.json", manifest.str());
  } catch (const ConfigError& e) {
    err << "lde: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "lde: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

}  // namespace lde::cli
