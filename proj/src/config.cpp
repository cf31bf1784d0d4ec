#include "hamdistill/config.hpp"

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

#include "hamdistill/analytics.hpp"
#include "hamdistill/hamlib.hpp"
#include "hamdistill/types.hpp"

namespace hd {

namespace {

const std::vector<std::string> kFamilies = {"diagonal",    "tfim_periodic", "trapped_ion",
                                            "rydberg",     "haar_random",   "clifford_diagonal"};
const std::vector<std::string> kBases = {"computational", "hadamard", "clifford_conjugated"};

ParamSpec families(const std::string& def) {
  return {"families", ParamType::text, def, "comma-separated Hamiltonian families", kFamilies};
}
ParamSpec basis() {
  return {"basis", ParamType::text, "hadamard", "measurement basis of the m measured pairs", kBases};
}
ParamSpec ham_seed() {
  return {"hamiltonian_seed", ParamType::integer, "1", "seed for randomized Hamiltonian families", {}};
}
ParamSpec samples(const std::string& def) {
  return {"samples", ParamType::integer, def, "Monte-Carlo branch samples when enumeration is too large", {}};
}
ParamSpec t_samples() {
  return {"t_samples", ParamType::integer, "200", "time draws per uniform(T) average on the sampled path", {}};
}
std::vector<ParamSpec> link_keys() {
  return {{"beta", ParamType::real, "2.82e-4", "phase-noise accumulation rate (1/km)", {}},
          {"y0", ParamType::real, "3e-8", "dark count rate", {}},
          {"alpha_db", ParamType::real, "0.21", "fiber loss (dB/km)", {}},
          {"f_ec", ParamType::real, "1.06", "error-correction efficiency", {}}};
}

std::vector<ExperimentSchema> build_schemas() {
  std::vector<ExperimentSchema> s;
  s.push_back({"fig_m_sweep",
               "fidelity and yield versus measured pairs m at fixed n and p, plus a recurrence baseline",
               {{"n", ParamType::integer, "10", "pairs per group", {}},
                {"p", ParamType::real, "0.2", "local depolarizing strength", {}},
                families("diagonal,tfim_periodic,trapped_ion,rydberg"),
                {"m_values", ParamType::int_list, "1,2,3,4,5,6,7,8,9", "measured pair counts", {}},
                basis(),
                {"measure", ParamType::text, "delta", "time measure", {"delta", "uniform"}},
                {"T", ParamType::real, "10", "uniform time window when measure = uniform", {}},
                samples("200"),
                t_samples(),
                ham_seed(),
                {"recurrence_rounds", ParamType::integer, "1", "rounds of the recurrence baseline", {}}},
               {"family", "m", "fidelity", "yield", "std_error"}});
  s.push_back({"fig_noise_sweep",
               "fidelity and yield versus depolarizing strength at fixed (n, m)",
               {{"n", ParamType::integer, "6", "pairs per group", {}},
                {"m", ParamType::integer, "3", "measured pairs", {}},
                {"p_values", ParamType::real_list, "0.05,0.1,0.15,0.2,0.25,0.3,0.35,0.4",
                 "depolarizing strengths", {}},
                families("diagonal,tfim_periodic,trapped_ion,rydberg"),
                basis(),
                samples("20000"),
                ham_seed()},
               {"family", "p", "fidelity", "yield"}});
  s.push_back({"fig_finite_time",
               "fidelity and yield versus evolution time window T in native time units",
               {{"n", ParamType::integer, "5", "pairs per group", {}},
                {"m", ParamType::integer, "3", "measured pairs", {}},
                {"p", ParamType::real, "0.2", "local depolarizing strength", {}},
                families("trapped_ion,rydberg"),
                {"T_values", ParamType::real_list,
                 "0.5,1,1.5,2,2.5,3,4,5,6,7,8,9,10,11,12,13,14,15,16,18,20", "time windows (time units)", {}},
                {"measure", ParamType::text, "uniform",
                 "uniform averages t over [0,T]; fixed evolves for exactly t = T", {"uniform", "fixed"}},
                basis(),
                samples("20000"),
                t_samples(),
                ham_seed()},
               {"family", "time_units", "physical_time", "unit", "fidelity", "yield"}});
  s.push_back({"fig_nonpauli",
               "depolarizing then amplitude damping noise, with and without Pauli twirling",
               {{"n", ParamType::integer, "5", "pairs per group", {}},
                {"m", ParamType::integer, "3", "measured pairs", {}},
                {"p", ParamType::real, "0.2", "depolarizing strength applied first", {}},
                {"gamma_values", ParamType::real_list, "0,0.05,0.1,0.15,0.2,0.25,0.3",
                 "amplitude damping strengths", {}},
                families("trapped_ion,rydberg"),
                basis(),
                ham_seed()},
               {"family", "gamma", "twirl", "fidelity", "yield"}});
  s.push_back({"fig_tolerance_asymptotic",
               "asymptotic depolarizing tolerance versus m/n",
               {{"ratios", ParamType::real_list,
                 "0.05,0.1,0.15,0.2,0.25,0.3,0.35,0.4,0.45,0.5,0.55,0.6,0.65,0.7,0.75,0.8,0.85,0.9,0.95,1",
                 "values of m/n", {}}},
               {"m_over_n", "p_tol", "error_rate_tol"}});
  s.push_back({"fig_tolerance_finite",
               "finite-(n, m) tolerable error rate of the diagonal protocol",
               {{"n_values", ParamType::int_list, "10,20,30,40,50", "group sizes", {}},
                {"f_ec", ParamType::real, "1", "weight of the bit-error entropy term", {}}},
               {"n", "m", "m_over_n", "error_rate_tol"}});
  {
    ExperimentSchema q{"app_qkd",
                       "maximum QKD distance per protocol versus photon bit error rate",
                       {{"e_d_values", ParamType::real_list,
                         "0.005,0.0075,0.01,0.0125,0.015,0.0175,0.02,0.0225,0.025,0.0275,0.03",
                         "photon bit error rates", {}},
                        {"protocols", ParamType::text, "one_way,recurrence:1,recurrence:2,hamiltonian:15:12",
                         "comma-separated protocols", {}}},
                       {"e_d", "protocol", "max_distance_km", "reachable"}};
    for (auto& k : link_keys()) q.params.push_back(k);
    s.push_back(q);
  }
  {
    ExperimentSchema r{"app_repeater",
                       "repeater-link fidelity per protocol versus distance",
                       {{"e_d", ParamType::real, "0.015", "photon bit error rate", {}},
                        {"l_max", ParamType::real, "400", "largest distance (km)", {}},
                        {"l_step", ParamType::real, "5", "distance step (km)", {}},
                        {"threshold", ParamType::real, "0.9", "fidelity threshold reported in the manifest", {}},
                        {"protocols", ParamType::text, "none,recurrence:1,recurrence:2,haar_hamiltonian:15:12",
                         "comma-separated protocols", {}}},
                       {"distance_km", "protocol", "fidelity"}};
    for (auto& k : link_keys()) r.params.push_back(k);
    s.push_back(r);
  }
  s.push_back({"theorem_check",
               "runs the acceptance suite and tabulates each criterion",
               {},
               {"criterion", "pass", "residual"}});
  return s;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

bool parse_int(const std::string& s, std::int64_t& out) {
  if (s.empty()) return false;
  char* end = nullptr;
  errno = 0;
  const long long v = std::strtoll(s.c_str(), &end, 10);
  if (errno != 0 || *end != '\0') return false;
  out = v;
  return true;
}

bool parse_real(const std::string& s, double& out) {
  if (s.empty()) return false;
  char* end = nullptr;
  errno = 0;
  const double v = std::strtod(s.c_str(), &end);
  if (errno != 0 || *end != '\0' || !std::isfinite(v)) return false;
  out = v;
  return true;
}

std::string type_name(ParamType t) {
  switch (t) {
    case ParamType::integer: return "integer";
    case ParamType::real: return "real";
    case ParamType::text: return "text";
    case ParamType::real_list: return "list of reals";
    case ParamType::int_list: return "list of integers";
    case ParamType::flag: return "flag (true/false)";
  }
  return "?";
}

// Empty string when the value fits the key, otherwise the reason.
std::string check_value(const ParamSpec& spec, const std::string& v) {
  std::int64_t i = 0;
  double r = 0.0;
  switch (spec.type) {
    case ParamType::integer:
      if (!parse_int(v, i)) return "expected " + type_name(spec.type) + ", got '" + v + "'";
      return "";
    case ParamType::real:
      if (!parse_real(v, r)) return "expected " + type_name(spec.type) + ", got '" + v + "'";
      return "";
    case ParamType::flag:
      if (v != "true" && v != "false") return "expected true or false, got '" + v + "'";
      return "";
    case ParamType::real_list:
    case ParamType::int_list: {
      const auto items = split_list(v);
      if (items.empty()) return "expected a nonempty " + type_name(spec.type);
      for (const auto& it : items) {
        const bool ok = spec.type == ParamType::int_list ? parse_int(it, i) : parse_real(it, r);
        if (!ok) return "list item '" + it + "' is not a valid number";
      }
      return "";
    }
    case ParamType::text: {
      if (spec.key == "protocols") {
        const auto items = split_list(v);
        if (items.empty()) return "expected at least one protocol";
        for (const auto& it : items) {
          try {
            parse_protocol_choice(it);
          } catch (const DomainError& e) {
            return e.what();
          }
        }
        return "";
      }
      if (spec.choices.empty()) return "";
      const auto items = spec.key == "families" ? split_list(v) : std::vector<std::string>{v};
      if (items.empty()) return "expected at least one value";
      for (const auto& it : items)
        if (std::find(spec.choices.begin(), spec.choices.end(), it) == spec.choices.end()) {
          std::string all;
          for (const auto& c : spec.choices) all += (all.empty() ? "" : ", ") + c;
          return "'" + it + "' is not one of: " + all;
        }
      return "";
    }
  }
  return "";
}

const ParamSpec* find_param(const ExperimentSchema& s, const std::string& key) {
  for (const auto& p : s.params)
    if (p.key == key) return &p;
  return nullptr;
}

std::string nearest(const std::string& key, const std::vector<std::string>& candidates) {
  std::string best;
  std::size_t bd = std::string::npos;
  for (const auto& c : candidates) {
    const std::size_t dd = edit_distance(key, c);
    if (dd < bd) {
      bd = dd;
      best = c;
    }
  }
  return best;
}

}  // namespace

std::size_t edit_distance(const std::string& a, const std::string& b) {
  std::vector<std::size_t> prev(b.size() + 1), cur(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) prev[j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    cur[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j)
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1)});
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

const std::vector<ExperimentSchema>& experiment_schemas() {
  static const std::vector<ExperimentSchema> s = build_schemas();
  return s;
}

const ExperimentSchema& find_schema(const std::string& id) {
  for (const auto& s : experiment_schemas())
    if (s.id == id) return s;
  throw DomainError("unknown experiment '" + id + "'");
}

std::string ConfigIssue::str() const {
  return line > 0 ? "line " + std::to_string(line) + ": " + message : message;
}

namespace {
std::string join_issues(const std::vector<ConfigIssue>& v) {
  std::string s;
  for (const auto& i : v) s += (s.empty() ? "" : "\n") + i.str();
  return s;
}
}  // namespace

ConfigError::ConfigError(std::vector<ConfigIssue> issues)
    : std::runtime_error(join_issues(issues)), issues_(std::move(issues)) {}

ExperimentConfig validate_config(const std::string& text) {
  std::vector<ConfigIssue> issues;
  std::map<std::string, std::pair<std::string, int>> raw;
  std::istringstream in(text);
  std::string line;
  int ln = 0;
  while (std::getline(in, line)) {
    ++ln;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      issues.push_back({ln, "expected 'key = value', got '" + line + "'"});
      continue;
    }
    const std::string key = trim(line.substr(0, eq)), value = trim(line.substr(eq + 1));
    if (key.empty()) {
      issues.push_back({ln, "missing key before '='"});
      continue;
    }
    if (auto it = raw.find(key); it != raw.end()) {
      issues.push_back({ln, "duplicate key '" + key + "' (first set on line " +
                                std::to_string(it->second.second) + ")"});
      continue;
    }
    raw[key] = {value, ln};
  }

  ExperimentConfig cfg;
  auto exp_it = raw.find("experiment");
  if (exp_it == raw.end()) {
    issues.push_back({0, "missing required key 'experiment'"});
    throw ConfigError(issues);
  }
  const ExperimentSchema* schema = nullptr;
  for (const auto& s : experiment_schemas())
    if (s.id == exp_it->second.first) schema = &s;
  if (!schema) {
    std::vector<std::string> ids;
    for (const auto& s : experiment_schemas()) ids.push_back(s.id);
    issues.push_back({exp_it->second.second, "unknown experiment '" + exp_it->second.first +
                                                 "' (did you mean '" + nearest(exp_it->second.first, ids) +
                                                 "'?)"});
    throw ConfigError(issues);
  }
  cfg.experiment = schema->id;
  cfg.output_path = schema->id + ".csv";

  std::vector<std::string> valid = {"experiment", "seed", "output"};
  for (const auto& p : schema->params) valid.push_back(p.key);

  for (const auto& [key, vl] : raw) {
    const auto& [value, at] = vl;
    if (key == "experiment") continue;
    if (key == "seed") {
      std::int64_t s = 0;
      if (!parse_int(value, s) || s < 0)
        issues.push_back({at, "key 'seed': expected a nonnegative integer, got '" + value + "'"});
      else
        cfg.seed = static_cast<std::uint64_t>(s);
      continue;
    }
    if (key == "output") {
      if (value.empty())
        issues.push_back({at, "key 'output': empty path"});
      else
        cfg.output_path = value;
      continue;
    }
    const ParamSpec* spec = find_param(*schema, key);
    if (!spec) {
      issues.push_back({at, "unknown key '" + key + "' for experiment " + schema->id +
                                " (nearest valid key: '" + nearest(key, valid) + "')"});
      continue;
    }
    const std::string why = check_value(*spec, value);
    if (!why.empty()) {
      issues.push_back({at, "key '" + key + "': " + why});
      continue;
    }
    cfg.params[key] = value;
  }
  for (const auto& p : schema->params)
    if (!cfg.params.count(p.key)) cfg.params[p.key] = p.default_value;
  if (!issues.empty()) {
    std::stable_sort(issues.begin(), issues.end(),
                     [](const ConfigIssue& a, const ConfigIssue& b) { return a.line < b.line; });
    throw ConfigError(issues);
  }
  return cfg;
}

ExperimentConfig load_config_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError({{0, "cannot read config file '" + path + "'"}});
  std::stringstream ss;
  ss << f.rdbuf();
  return validate_config(ss.str());
}

std::string serialize_manifest(const ExperimentConfig& cfg,
                               const std::vector<std::pair<std::string, std::string>>& metadata) {
  std::ostringstream o;
  for (const auto& [k, v] : metadata) o << "# " << k << " = " << v << "\n";
  o << "experiment = " << cfg.experiment << "\n";
  o << "seed = " << cfg.seed << "\n";
  o << "output = " << cfg.output_path << "\n";
  for (const auto& [k, v] : cfg.params) o << k << " = " << v << "\n";
  return o.str();
}

std::string config_help() {
  std::ostringstream o;
  o << "Config files hold `key = value` lines; `#` starts a comment.\n"
       "Every experiment accepts: experiment (required), seed (default 1),\n"
       "output (default <experiment>.csv). Lists are comma-separated.\n";
  for (const auto& s : experiment_schemas()) {
    o << "\n" << s.id << ": " << s.summary << "\n";
    o << "  columns: ";
    for (std::size_t i = 0; i < s.csv_columns.size(); ++i) o << (i ? "," : "") << s.csv_columns[i];
    o << "\n";
    for (const auto& p : s.params) {
      o << "  " << p.key << " (" << type_name(p.type) << ", default " << p.default_value << "): " << p.help;
      if (!p.choices.empty()) {
        o << " [";
        for (std::size_t i = 0; i < p.choices.size(); ++i) o << (i ? "|" : "") << p.choices[i];
        o << "]";
      }
      o << "\n";
    }
  }
  return o.str();
}

namespace {
const std::string& lookup(const ExperimentConfig& c, const std::string& key) {
  auto it = c.params.find(key);
  if (it == c.params.end()) throw DomainError("config has no key '" + key + "'");
  return it->second;
}
}  // namespace

std::int64_t ExperimentConfig::get_int(const std::string& key) const {
  std::int64_t v = 0;
  if (!parse_int(lookup(*this, key), v)) throw DomainError("key '" + key + "' is not an integer");
  return v;
}

double ExperimentConfig::get_real(const std::string& key) const {
  double v = 0;
  if (!parse_real(lookup(*this, key), v)) throw DomainError("key '" + key + "' is not a real");
  return v;
}

const std::string& ExperimentConfig::get_text(const std::string& key) const { return lookup(*this, key); }

bool ExperimentConfig::get_flag(const std::string& key) const { return lookup(*this, key) == "true"; }

std::vector<double> ExperimentConfig::get_reals(const std::string& key) const {
  std::vector<double> out;
  for (const auto& it : split_list(lookup(*this, key))) {
    double v = 0;
    if (!parse_real(it, v)) throw DomainError("key '" + key + "' has a non-numeric item");
    out.push_back(v);
  }
  return out;
}

std::vector<std::int64_t> ExperimentConfig::get_ints(const std::string& key) const {
  std::vector<std::int64_t> out;
  for (const auto& it : split_list(lookup(*this, key))) {
    std::int64_t v = 0;
    if (!parse_int(it, v)) throw DomainError("key '" + key + "' has a non-integer item");
    out.push_back(v);
  }
  return out;
}

std::vector<std::string> ExperimentConfig::get_list(const std::string& key) const {
  return split_list(lookup(*this, key));
}

}  // namespace hd
