#include <omp.h>

#include <CLI11.hpp>
#include <chrono>
#include <iostream>
#include <optional>

#include "hamdistill/acceptance.hpp"
#include "hamdistill/config.hpp"
#include "hamdistill/experiments.hpp"
#include "hamdistill/types.hpp"

namespace {

enum Exit { ok = 0, validation = 1, runtime = 2 };

int cmd_run(const std::string& path, const std::optional<std::uint64_t>& seed, int threads,
            const std::string& out) {
  hd::ExperimentConfig cfg;
  try {
    cfg = hd::load_config_file(path);
    if (seed) cfg.seed = *seed;
    if (!out.empty()) cfg.output_path = out;
    hd::check_semantics(cfg);
  } catch (const hd::ConfigError& e) {
    for (const auto& i : e.issues()) std::cerr << path << ": " << i.str() << "\n";
    return validation;
  } catch (const hd::DomainError& e) {
    std::cerr << path << ": " << e.what() << "\n";
    return validation;
  }
  if (threads > 0) omp_set_num_threads(threads);
  const int used = threads > 0 ? threads : omp_get_max_threads();
  try {
    const auto t0 = std::chrono::steady_clock::now();
    const hd::ResultTable t = hd::run_experiment(cfg, [](const std::string& s) { std::cerr << s << "\n"; });
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const std::string mp = hd::write_outputs(cfg, t, wall, used);
    std::cout << "wrote " << cfg.output_path << " (" << t.rows.size() << " rows) and " << mp << "\n";
  } catch (const hd::ConfigError& e) {
    for (const auto& i : e.issues()) std::cerr << path << ": " << i.str() << "\n";
    return validation;
  } catch (const std::exception& e) {
    std::cerr << "runtime failure: " << e.what() << "\n";
    return runtime;
  }
  return ok;
}

int cmd_check() {
  try {
    bool all = true;
    hd::run_acceptance([&](const hd::CriterionResult& r) {
      all = all && r.pass;
      std::cout << hd::format_result(r) << std::endl;
    });
    return all ? ok : runtime;
  } catch (const std::exception& e) {
    std::cerr << "runtime failure: " << e.what() << "\n";
    return runtime;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hamiltonian entanglement distillation experiments"};
  app.require_subcommand(1);
  app.footer(hd::config_help());

  auto* run = app.add_subcommand("run", "run the experiment described by a config file");
  std::string path, out;
  std::uint64_t seed_v = 0;
  int threads = 0;
  run->add_option("config", path, "config file with key = value lines")->required();
  auto* seed_opt = run->add_option("--seed", seed_v, "override the config seed");
  run->add_option("--threads", threads, "OpenMP worker threads (default: runtime choice)")
      ->check(CLI::PositiveNumber);
  run->add_option("--out", out, "CSV output path (manifest written beside it)");

  app.add_subcommand("check", "run the acceptance suite, one line per criterion");
  app.add_subcommand("list-experiments", "list experiment ids and their CSV columns");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? ok : validation;
  }

  if (app.got_subcommand("run")) {
    std::optional<std::uint64_t> seed;
    if (seed_opt->count()) seed = seed_v;
    return cmd_run(path, seed, threads, out);
  }
  if (app.got_subcommand("check")) return cmd_check();
  for (const auto& s : hd::experiment_schemas()) {
    std::cout << s.id << "\t";
    for (std::size_t i = 0; i < s.csv_columns.size(); ++i) std::cout << (i ? "," : "") << s.csv_columns[i];
    std::cout << "\t" << s.summary << "\n";
  }
  return ok;
}
