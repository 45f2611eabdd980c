#include "cli/report.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "lde/error.hpp"

namespace lde::cli {
namespace {

std::string format_alpha(const std::optional<double>& alpha) {
  return alpha ? format_number(*alpha) : std::string();
}

}  // namespace

std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  char buf[32];
  const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, x);
  if (ec != std::errc()) throw Error(ErrorCode::kInvalidArgument, "number formatting failed");
  return std::string(buf, end);
}

void write_pairs_csv(const ExperimentResult& result, std::ostream& out) {
  out << "test_id,alpha,m,method,policy_i,policy_j,est_i,est_j,true_i,true_j,correct\n";
  for (const PairRow& r : pair_rows(result)) {
    out << r.test_id << ',' << format_alpha(r.alpha) << ',' << r.m << ',' << r.method << ','
        << r.policy_i << ',' << r.policy_j << ',' << format_number(r.est_i) << ','
        << format_number(r.est_j) << ',' << format_number(r.true_i) << ','
        << format_number(r.true_j) << ',' << (r.correct ? 1 : 0) << '\n';
  }
}

void write_aggregate_csv(const std::vector<AggregateRow>& rows, std::ostream& out) {
  out << "method,alpha,m,comparison_rate,mean_err,std_err,pearson,spearman\n";
  for (const AggregateRow& r : rows) {
    out << r.method << ',' << (r.pooled ? std::string("all") : format_alpha(r.alpha)) << ','
        << r.m << ',' << format_number(r.comparison_rate) << ',' << format_number(r.mean_err)
        << ',' << format_number(r.std_err) << ',' << format_number(r.pearson) << ','
        << format_number(r.spearman) << '\n';
  }
}

void write_scores_csv(const ExperimentResult& result, std::ostream& out) {
  out << "test_id,alpha,m,method,policies,incorrect_pairs,score\n";
  for (const TestRecord& t : result.tests) {
    for (const ComparisonReport& r : t.reports) {
      out << t.test_id << ',' << format_alpha(t.alpha) << ',' << t.m << ',' << r.method << ','
          << r.policy_count() << ',' << r.incorrect_pairs << ',' << format_number(r.score)
          << '\n';
    }
  }
}

void write_bounds_csv(const std::vector<BoundCheckRow>& rows, std::ostream& out) {
  out << "pair,m,kind,state,delta,gap,radius,bound,observed,standard_error,violated\n";
  for (const BoundCheckRow& r : rows) {
    out << r.pair << ',' << r.m << ',' << to_string(r.kind) << ','
        << (r.state ? std::to_string(*r.state) : std::string()) << ','
        << (r.delta ? format_number(*r.delta) : std::string()) << ',' << format_number(r.gap)
        << ',' << format_number(r.radius) << ',' << format_number(r.bound) << ','
        << format_number(r.observed) << ',' << format_number(r.standard_error) << ','
        << (r.violated ? 1 : 0) << '\n';
  }
}

void write_manifest(const Manifest& manifest, std::ostream& out) {
  char hash[17];
  std::snprintf(hash, sizeof hash, "%016llx",
                static_cast<unsigned long long>(manifest.config_hash));
  const nlohmann::ordered_json j = {{"subcommand", manifest.subcommand},
                                    {"seed", manifest.seed},
                                    {"config_hash", std::string("fnv1a64:") + hash},
                                    {"version", LDE_VERSION},
                                    {"files", manifest.files}};
  out << j.dump(2) << '\n';
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path.string());
  out << text;
  if (!out) throw Error(ErrorCode::kIo, "write failed for " + path.string());
}

std::vector<std::string> emit_reports(const ExperimentResult& result,
                                      const std::filesystem::path& dir) {
  std::ostringstream pairs, agg, scores;
  write_pairs_csv(result, pairs);
  write_aggregate_csv(aggregate(result), agg);
  write_scores_csv(result, scores);
  write_file(dir / "pairs.csv", pairs.str());
  write_file(dir / "aggregate.csv", agg.str());
  write_file(dir / "scores.csv", scores.str());
  return {"pairs.csv", "aggregate.csv", "scores.csv"};
}

void print_summary(const std::vector<AggregateRow>& rows, std::ostream& out) {
  char line[160];
  std::snprintf(line, sizeof line, "%-6s %6s %3s %6s %10s %10s %10s %8s %8s\n", "method",
                "alpha", "m", "tests", "rate", "mean_err", "std_err", "pearson", "spearman");
  out << line;
  for (const AggregateRow& r : rows) {
    const std::string alpha = r.pooled ? "all" : (r.alpha ? format_number(*r.alpha) : "-");
    std::snprintf(line, sizeof line, "%-6s %6s %3zu %6zu %10.4f %10.3e %10.3e %8.4f %8.4f\n",
                  r.method.c_str(), alpha.c_str(), r.m, r.tests, r.comparison_rate, r.mean_err,
                  r.std_err, r.pearson, r.spearman);
    out << line;
  }
}

}  // namespace lde::cli
