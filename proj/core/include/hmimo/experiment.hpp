// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The hmimo Authors

#ifndef HMIMO_EXPERIMENT_HPP
#define HMIMO_EXPERIMENT_HPP

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "hmimo/experiment_config.hpp"
#include "hmimo/monte_carlo.hpp"

namespace hmimo {

/// One CSV row. Unset optionals become empty fields.
struct ResultRow {
  std::string experiment;
  std::uint64_t seed = 0;
  CsiMode mode = CsiMode::full;
  int num_elements = 0;
  int num_users = 0;
  double snr_db = 0.0;
  std::string x_name;
  double x_value = 0.0;
  std::optional<double> analytic_nats;
  std::optional<double> mc_mean_nats;
  std::optional<double> mc_ci95;
  std::optional<double> solver_t_star;
};

inline constexpr const char* kCsvHeader =
    "experiment,seed,mode,M,K,snr_db,x_name,x_value,analytic_nats,mc_mean_nats,mc_ci95,solver_t_star";

/// Display unit. The CSV is always in nats.
enum class Unit { nats, bits };

inline double from_nats(double nats, Unit unit) { return unit == Unit::bits ? nats / std::log(2.0) : nats; }

/// Point of the parameter grid one row describes.
struct GridPoint {
  int num_elements = 0;
  int num_users = 0;
  double snr_db = 0.0;
  std::optional<double> csi_error_db;
  double x_value = 0.0;
};

/// Coupling model for M elements under the config's array settings. The
/// excitation phases come from the config seed.
CouplingModel build_coupling(const ExperimentConfig& config, int num_elements);

/// Monte Carlo scenario for one grid point and mode.
Scenario make_scenario(const ExperimentConfig& config, const GridPoint& point, CsiMode mode,
                       const CouplingModel& coupling);

/// Analytic throughput averaged over users and over the layouts the Monte
/// Carlo run uses (the first `analytic_layouts` when resampling, else one).
double analytic_average(const Scenario& scenario, const ExperimentConfig& config, int threads = 0);

/// Grid points in output order: series axes outermost, sweep innermost.
std::vector<GridPoint> expand_grid(const ExperimentConfig& config);

/// Runs every grid point and mode. Progress goes to `log` when given, with
/// throughputs in `log_unit`.
std::vector<ResultRow> run_experiment(const ExperimentConfig& config, int threads = 0,
                                      std::ostream* log = nullptr, Unit log_unit = Unit::nats);

/// %.17g numbers, LF line endings, header first.
std::string format_csv(const std::vector<ResultRow>& rows);

struct OutputFiles {
  std::filesystem::path csv;
  std::filesystem::path meta;
};

/// Writes <output_dir>/<name>.csv and a .meta sidecar carrying the config
/// hash and canonical config.
OutputFiles write_outputs(const ExperimentConfig& config, const std::vector<ResultRow>& rows);

}  // namespace hmimo

#endif  // HMIMO_EXPERIMENT_HPP
