#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace hd {

enum class ParamType { integer, real, text, real_list, int_list, flag };

struct ParamSpec {
  std::string key;
  ParamType type = ParamType::text;
  std::string default_value;
  std::string help;
  std::vector<std::string> choices;  // allowed values for text keys (or items of lists)
};

struct ExperimentSchema {
  std::string id;
  std::string summary;
  std::vector<ParamSpec> params;
  std::vector<std::string> csv_columns;
};

const std::vector<ExperimentSchema>& experiment_schemas();
const ExperimentSchema& find_schema(const std::string& id);

struct ConfigIssue {
  int line = 0;  // 0 when the issue is not tied to a line
  std::string message;
  std::string str() const;
};

class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(std::vector<ConfigIssue> issues);
  const std::vector<ConfigIssue>& issues() const { return issues_; }

 private:
  std::vector<ConfigIssue> issues_;
};

// A fully resolved configuration: every schema key carries a value.
struct ExperimentConfig {
  std::string experiment;
  std::uint64_t seed = 1;
  std::string output_path;
  std::map<std::string, std::string> params;

  std::int64_t get_int(const std::string& key) const;
  double get_real(const std::string& key) const;
  const std::string& get_text(const std::string& key) const;
  bool get_flag(const std::string& key) const;
  std::vector<double> get_reals(const std::string& key) const;
  std::vector<std::int64_t> get_ints(const std::string& key) const;
  std::vector<std::string> get_list(const std::string& key) const;
};

// Parses `key = value` lines with `#` comments. Throws ConfigError listing
// every problem found, each with its line number.
ExperimentConfig validate_config(const std::string& text);
ExperimentConfig load_config_file(const std::string& path);

// Resolved config as parseable `key = value` text; metadata lines are
// comments, so the result validates back to the same config.
std::string serialize_manifest(const ExperimentConfig& cfg,
                               const std::vector<std::pair<std::string, std::string>>& metadata = {});

std::string config_help();

std::size_t edit_distance(const std::string& a, const std::string& b);
std::vector<std::string> split_list(const std::string& s);

}  // namespace hd
