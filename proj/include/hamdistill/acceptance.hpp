#pragma once

#include <functional>
#include <string>
#include <vector>

namespace hd {

struct CriterionResult {
  std::string id;
  bool pass = false;
  double residual = 0.0;  // criterion-specific worst-case figure
  std::string detail;
  double seconds = 0.0;
};

std::vector<std::string> acceptance_ids();

// Runs the criteria in order; `on_result` fires as each one finishes.
std::vector<CriterionResult> run_acceptance(const std::function<void(const CriterionResult&)>& on_result = {});

std::string format_result(const CriterionResult& r);

}  // namespace hd
