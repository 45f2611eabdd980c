#include "cli/config.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "lde/error.hpp"

namespace lde::cli {
namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& path, const std::string& msg) {
  throw Error(ErrorCode::kSchema, (path.empty() ? "config" : path) + ": " + msg);
}

// Walks one JSON object, remembering which keys were consumed so that any
// leftover key can be reported.
class Section {
 public:
  Section(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) fail(path_, "expected an object");
  }

  std::string at(const std::string& key) const {
    return path_.empty() ? key : path_ + "." + key;
  }

  const json* find(const std::string& key) {
    const auto it = j_.find(key);
    if (it == j_.end()) return nullptr;
    seen_.insert(key);
    return &*it;
  }

  void finish() const {
    for (const auto& [key, value] : j_.items()) {
      if (!seen_.count(key)) fail(at(key), "unknown key");
    }
  }

  std::size_t count(const std::string& key, std::size_t fallback, std::size_t min = 0) {
    const json* v = find(key);
    if (!v) return fallback;
    return to_count(*v, at(key), min);
  }

  double number(const std::string& key, double fallback) {
    const json* v = find(key);
    return v ? to_number(*v, at(key)) : fallback;
  }

  std::string string(const std::string& key, const std::string& fallback) {
    const json* v = find(key);
    if (!v) return fallback;
    if (!v->is_string()) fail(at(key), "expected a string");
    return v->get<std::string>();
  }

  static std::size_t to_count(const json& v, const std::string& path, std::size_t min) {
    if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0)) {
      fail(path, "expected a non-negative integer");
    }
    const auto n = v.get<std::uint64_t>();
    if (n < min) fail(path, "must be at least " + std::to_string(min));
    return static_cast<std::size_t>(n);
  }

  static double to_number(const json& v, const std::string& path) {
    if (!v.is_number()) fail(path, "expected a number");
    const double x = v.get<double>();
    if (!std::isfinite(x)) fail(path, "must be finite");
    return x;
  }

  const json& raw() const { return j_; }

 private:
  const json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

const json& nonempty_array(const json& v, const std::string& path) {
  if (!v.is_array()) fail(path, "expected an array");
  if (v.empty()) fail(path, "must not be empty");
  return v;
}

std::vector<double> alphas(const json& v, const std::string& path) {
  std::vector<double> out;
  const json& arr = nonempty_array(v, path);
  for (std::size_t i = 0; i < arr.size(); ++i) {
    const std::string p = path + "[" + std::to_string(i) + "]";
    const double a = Section::to_number(arr[i], p);
    if (!(a >= 0.0 && a < 1.0)) fail(p, "alpha must lie in [0, 1)");
    out.push_back(a);
  }
  return out;
}

std::vector<std::size_t> counts(const json& v, const std::string& path, std::size_t min) {
  std::vector<std::size_t> out;
  const json& arr = nonempty_array(v, path);
  for (std::size_t i = 0; i < arr.size(); ++i) {
    out.push_back(Section::to_count(arr[i], path + "[" + std::to_string(i) + "]", min));
  }
  return out;
}

std::vector<Estimator> estimators(const json& v, const std::string& path) {
  std::vector<Estimator> out;
  const json& arr = nonempty_array(v, path);
  for (std::size_t i = 0; i < arr.size(); ++i) {
    const std::string p = path + "[" + std::to_string(i) + "]";
    if (!arr[i].is_string()) fail(p, "expected an estimator name");
    const auto e = parse_estimator(arr[i].get<std::string>());
    if (!e) fail(p, "unknown estimator '" + arr[i].get<std::string>() + "'");
    out.push_back(*e);
  }
  return out;
}

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& p) {
  const std::filesystem::path path(p);
  return path.is_absolute() ? path : base / path;
}

void read_synth(Section s, SynthSection& out) {
  if (const json* v = s.find("env")) {
    if (!v->is_string()) fail(s.at("env"), "expected a string");
    const auto kind = parse_reward_kind(v->get<std::string>());
    if (!kind) fail(s.at("env"), "expected \"ex11\" or \"ex12\"");
    out.env = *kind;
  }
  out.n_states = s.count("n_states", out.n_states, 2);
  out.n_actions = s.count("n_actions", out.n_actions, 2);
  if (const json* v = s.find("alphas")) out.alphas = alphas(*v, s.at("alphas"));
  if (const json* v = s.find("ms")) out.ms = counts(*v, s.at("ms"), 1);
  out.tests = s.count("tests", out.tests);
  if (const json* v = s.find("estimators")) out.estimators = estimators(*v, s.at("estimators"));
  s.finish();
}

void read_classify(Section s, ClassifySection& out, const std::filesystem::path& base) {
  if (const json* v = s.find("dataset")) {
    if (!v->is_string()) fail(s.at("dataset"), "expected a path");
    out.dataset = resolve(base, v->get<std::string>());
  }
  out.label_column = s.string("label_column", out.label_column);
  out.splits = s.count("splits", out.splits);
  out.repeats = s.count("repeats", out.repeats);
  out.policies = s.count("policies", out.policies, 2);
  out.epochs = s.count("epochs", out.epochs);
  out.epsilon = s.number("epsilon", out.epsilon);
  if (out.epsilon < 0.0) fail(s.at("epsilon"), "must be non-negative");
  out.subsample = s.number("subsample", out.subsample);
  if (!(out.subsample > 0.0 && out.subsample <= 1.0)) fail(s.at("subsample"), "must lie in (0, 1]");
  out.eta0 = s.number("eta0", out.eta0);
  if (!(out.eta0 > 0.0)) fail(s.at("eta0"), "must be positive");
  if (const json* v = s.find("estimators")) out.estimators = estimators(*v, s.at("estimators"));
  s.finish();
}

void read_rllogs(Section s, RllogsSection& out, const std::filesystem::path& base) {
  if (const json* v = s.find("log_sets")) {
    const json& arr = nonempty_array(*v, s.at("log_sets"));
    for (std::size_t i = 0; i < arr.size(); ++i) {
      Section item(arr[i], s.at("log_sets") + "[" + std::to_string(i) + "]");
      LogSetSource src;
      src.name = item.string("name", "set_" + std::to_string(i));
      const std::string logs = item.string("logs", "");
      const std::string values = item.string("true_values", "");
      if (logs.empty()) fail(item.at("logs"), "required");
      if (values.empty()) fail(item.at("true_values"), "required");
      src.logs = resolve(base, logs);
      src.true_values = resolve(base, values);
      item.finish();
      out.log_sets.push_back(std::move(src));
    }
  }
  if (const json* v = s.find("estimators")) out.estimators = estimators(*v, s.at("estimators"));
  s.finish();
}

void read_verify(Section s, VerifySection& out) {
  out.n_states = s.count("n_states", out.n_states, 1);
  out.n_actions = s.count("n_actions", out.n_actions, 2);
  out.pairs = s.count("pairs", out.pairs);
  if (const json* v = s.find("ms")) out.ms = counts(*v, s.at("ms"), 1);
  if (const json* v = s.find("deltas")) {
    out.deltas.clear();
    const json& arr = nonempty_array(*v, s.at("deltas"));
    for (std::size_t i = 0; i < arr.size(); ++i) {
      const std::string p = s.at("deltas") + "[" + std::to_string(i) + "]";
      const double d = Section::to_number(arr[i], p);
      if (d < 0.0) fail(p, "must be non-negative");
      out.deltas.push_back(d);
    }
  }
  out.resamples = s.count("resamples", out.resamples, 1);
  s.finish();
}

void read_bounds(Section s, BoundsSection& out) {
  out.total_records = s.count("N", out.total_records, 1);
  out.n_actions = s.count("n", out.n_actions, 2);
  out.gap = s.number("gap", out.gap);
  out.radius = s.number("R", out.radius);
  if (!(out.radius > 0.0)) fail(s.at("R"), "must be positive");
  if (s.find("m")) out.m = s.count("m", 1, 1);
  if (const json* v = s.find("verify")) {
    VerifySection verify;
    read_verify(Section(*v, s.at("verify")), verify);
    out.verify = verify;
  }
  s.finish();
}

void read_genlogs(Section s, GenlogsSection& out) {
  out.sets = s.count("sets", out.sets);
  out.policies = s.count("policies", out.policies, 2);
  out.episodes = s.count("episodes", out.episodes);
  out.horizon = s.count("horizon", out.horizon, 1);
  out.state_dim = s.count("state_dim", out.state_dim, 1);
  out.action_dim = s.count("action_dim", out.action_dim, 1);
  out.value_rollouts = s.count("value_rollouts", out.value_rollouts, 1);
  s.finish();
}

json parse_strict(const std::string& text) {
  std::vector<std::set<std::string>> scopes;
  std::string duplicate;
  json::parser_callback_t cb = [&](int, json::parse_event_t event, json& parsed) {
    switch (event) {
      case json::parse_event_t::object_start:
        scopes.emplace_back();
        break;
      case json::parse_event_t::object_end:
        scopes.pop_back();
        break;
      case json::parse_event_t::key:
        if (!scopes.back().insert(parsed.get<std::string>()).second && duplicate.empty()) {
          duplicate = parsed.get<std::string>();
        }
        break;
      default:
        break;
    }
    return true;
  };
  json j;
  try {
    j = json::parse(text, cb);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::kParse, std::string("config: ") + e.what());
  }
  if (!duplicate.empty()) throw Error(ErrorCode::kParse, "config: duplicate key '" + duplicate + "'");
  return j;
}

}  // namespace

Config parse_config(const std::string& text, const std::filesystem::path& base_dir) {
  const json j = parse_strict(text);
  Section top(j, "");
  Config cfg;
  cfg.text = text;
  if (const json* v = top.find("seed")) {
    if (!v->is_number_unsigned() && !(v->is_number_integer() && v->get<std::int64_t>() >= 0)) {
      fail("seed", "expected an unsigned 64-bit integer");
    }
    cfg.seed = v->get<std::uint64_t>();
  }
  if (const json* v = top.find("jobs")) {
    cfg.jobs = static_cast<unsigned>(Section::to_count(*v, "jobs", 1));
  }
  if (const json* v = top.find("output_dir")) {
    if (!v->is_string()) fail("output_dir", "expected a path");
    cfg.output_dir = v->get<std::string>();
  }
  if (const json* v = top.find("synth")) read_synth(Section(*v, "synth"), cfg.synth);
  if (const json* v = top.find("classify")) read_classify(Section(*v, "classify"), cfg.classify, base_dir);
  if (const json* v = top.find("rllogs")) read_rllogs(Section(*v, "rllogs"), cfg.rllogs, base_dir);
  if (const json* v = top.find("bounds")) read_bounds(Section(*v, "bounds"), cfg.bounds);
  if (const json* v = top.find("genlogs")) read_genlogs(Section(*v, "genlogs"), cfg.genlogs);
  top.finish();
  return cfg;
}

Config load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open config " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  Config cfg = parse_config(buf.str(), path.parent_path());
  cfg.source = path;
  return cfg;
}

std::uint64_t fnv1a64(const std::string& bytes) noexcept {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace lde::cli
