#pragma once

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "hamdistill/config.hpp"

namespace hd {

struct ResultTable {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
  // Extra manifest lines (reductions, derived thresholds).
  std::vector<std::pair<std::string, std::string>> notes;
};

extern const char* const kVersion;

// Range checks that need more than one key (m <= n and similar).
void check_semantics(const ExperimentConfig& cfg);

ResultTable run_experiment(const ExperimentConfig& cfg,
                           const std::function<void(const std::string&)>& log = {});

std::string format_number(double v);
std::string to_csv(const ResultTable& t);
std::string manifest_path(const std::string& csv_path);
// Writes the CSV and its manifest; returns the manifest path.
std::string write_outputs(const ExperimentConfig& cfg, const ResultTable& t, double wall_seconds,
                          int threads);

}  // namespace hd
