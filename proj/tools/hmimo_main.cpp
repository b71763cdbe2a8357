// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The hmimo Authors

// hmimo: run experiment configs, the oracle suite, or describe the catalog.
//
//   hmimo run <config.ini> [--threads N] [--quiet] [--unit nats|bits]
//   hmimo validate [--seed S] [--threads N]
//   hmimo describe [experiment-id]
//
// Thread count: --threads, else HMIMO_THREADS, else all cores. Results do
// not depend on it. --unit only changes the progress lines; the CSV is nats.

#include <cstdint>
#include <exception>
#include <iostream>
#include <map>
#include <string>

#include <CLI11.hpp>

#include "hmimo/experiment.hpp"
#include "hmimo/experiment_config.hpp"
#include "hmimo/validation.hpp"

namespace {

constexpr int kExitFailedChecks = 1;
constexpr int kExitBadInput = 2;

int run_validation_suite(std::uint64_t seed, int threads) {
  const hmimo::ValidationReport report = hmimo::run_validation(seed, threads);
  std::cout << hmimo::format_report(report);
  return report.all_passed() ? 0 : kExitFailedChecks;
}

int cmd_run(const std::string& path, int threads, bool quiet, hmimo::Unit unit) {
  const hmimo::ExperimentConfig config = hmimo::load_config(path);
  if (config.experiment == "validate") return run_validation_suite(config.seed, threads);
  const int workers = hmimo::resolve_thread_count(threads);
  if (!quiet) {
    std::cerr << "running " << config.experiment << " (" << config.trials << " trials, " << workers
              << " threads, config " << hmimo::config_hash(config) << ")\n";
  }
  const auto rows = hmimo::run_experiment(config, workers, quiet ? nullptr : &std::cerr, unit);
  const hmimo::OutputFiles files = hmimo::write_outputs(config, rows);
  std::cout << files.csv.string() << "\n";
  return 0;
}

int cmd_describe(const std::string& id) {
  if (id.empty()) {
    for (const std::string& name : hmimo::experiment_ids()) {
      std::cout << name << "\n  " << hmimo::describe_experiment(name) << "\n";
    }
    return 0;
  }
  std::cout << "# " << id << ": " << hmimo::describe_experiment(id) << "\n"
            << "# Default configuration; copy, edit and pass to `hmimo run`.\n\n"
            << hmimo::to_ini(hmimo::default_config(id));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Holographic MIMO downlink throughput experiments"};
  app.require_subcommand(1);

  int threads = 0;
  auto* run = app.add_subcommand("run", "Run an experiment config and write its CSV");
  std::string config_path;
  bool quiet = false;
  run->add_option("config", config_path, "INI experiment config")->required()->check(CLI::ExistingFile);
  run->add_option("--threads", threads, "Worker threads (overrides HMIMO_THREADS)")->check(CLI::PositiveNumber);
  run->add_flag("--quiet", quiet, "No progress output");
  hmimo::Unit unit = hmimo::Unit::nats;
  run->add_option("--unit", unit, "Throughput unit of the progress lines (CSV stays in nats)")
      ->transform(CLI::CheckedTransformer(std::map<std::string, hmimo::Unit>{{"nats", hmimo::Unit::nats},
                                                                              {"bits", hmimo::Unit::bits}}));

  auto* validate = app.add_subcommand("validate", "Run the oracle suite");
  std::uint64_t seed = 1;
  validate->add_option("--seed", seed, "Master seed");
  validate->add_option("--threads", threads, "Worker threads (overrides HMIMO_THREADS)")
      ->check(CLI::PositiveNumber);

  auto* describe = app.add_subcommand("describe", "Describe an experiment, or list them all");
  std::string id;
  describe->add_option("experiment-id", id, "Catalog id");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) return cmd_run(config_path, threads, quiet, unit);
    if (*validate) return run_validation_suite(seed, threads);
    if (*describe) return cmd_describe(id);
  } catch (const hmimo::InvalidArgument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitBadInput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFailedChecks;
  }
  return 0;
}
