#pragma once

#include <cstdint>
#include <filesystem>
#include <ostream>
#include <string>
#include <vector>

#include "lde/experiment.hpp"
#include "lde/verify.hpp"

namespace lde::cli {

// Shortest text that reads back to the same double; "nan" for NaN.
std::string format_number(double x);

void write_pairs_csv(const ExperimentResult& result, std::ostream& out);
void write_aggregate_csv(const std::vector<AggregateRow>& rows, std::ostream& out);
void write_scores_csv(const ExperimentResult& result, std::ostream& out);
void write_bounds_csv(const std::vector<BoundCheckRow>& rows, std::ostream& out);

struct Manifest {
  std::string subcommand;
  std::uint64_t seed = 0;
  std::uint64_t config_hash = 0;
  std::vector<std::string> files;
};

void write_manifest(const Manifest& manifest, std::ostream& out);

// pairs.csv, aggregate.csv and scores.csv under `dir`. Returns the file names.
std::vector<std::string> emit_reports(const ExperimentResult& result,
                                      const std::filesystem::path& dir);

void print_summary(const std::vector<AggregateRow>& rows, std::ostream& out);

// Writes `text` to `path`, creating parent directories.
void write_file(const std::filesystem::path& path, const std::string& text);

}  // namespace lde::cli
