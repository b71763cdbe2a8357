// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The hmimo Authors

#include "hmimo/experiment.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <map>

#include "hmimo/analytic.hpp"
#include "hmimo/random.hpp"
#include "hmimo/statistics.hpp"

namespace hmimo {
namespace {

std::string number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string optional_number(const std::optional<double>& v) { return v ? number(*v) : std::string(); }

double wavelength(const ExperimentConfig& c) { return kSpeedOfLight / (c.carrier_ghz * 1e9); }

}  // namespace

CouplingModel build_coupling(const ExperimentConfig& config, int num_elements) {
  const double lambda = wavelength(config);
  const double dimension = config.array_mode == ArrayMode::fixed_aperture
                               ? config.aperture_m
                               : config.spacing_wavelengths * lambda;
  const ArrayGeometry geometry =
      build_array_geometry(num_elements, config.array_mode, dimension, config.array_shape);
  // One phase draw per seed; a smaller array sees a prefix of the larger one's phases.
  Rng rng = make_substream(config.seed, 0, Substream::excitation);
  return make_coupling_model(coupling_matrix(geometry, lambda, config.sinc),
                             excitation_matrix(num_elements, rng));
}

Scenario make_scenario(const ExperimentConfig& config, const GridPoint& point, CsiMode mode,
                       const CouplingModel& coupling) {
  Scenario sc;
  SystemConfig& sys = sc.system;
  sys.num_elements = point.num_elements;
  sys.num_users = point.num_users;
  sys.noise_power_w = dbm_to_watts(config.noise_dbm);
  sys.wavelength_m = wavelength(config);
  sys.pathloss_exponent = config.pathloss_exponent;
  sys.pathloss_reference_m = config.pathloss_reference_m;
  sys.cell_radius_m = config.cell_radius_m;
  sys.min_user_distance_m = config.min_distance_m;
  sys.seed = config.seed;
  if (config.snr_reference == SnrReference::received) {
    sc.received_snr_db = point.snr_db;
  } else {
    sys.tx_power_w = db_to_linear(point.snr_db) * sys.noise_power_w;
  }
  sc.coupling = coupling;
  sc.mode = mode;
  sc.placement = config.placement;
  sc.csi_error_db = point.csi_error_db;
  sc.error_reference = config.error_reference;
  sc.mf_scaling = config.mf_scaling;
  sc.no_csi = config.no_csi;
  sc.maxmin.tolerance = config.maxmin_tolerance;
  return sc;
}

double analytic_average(const Scenario& scenario, const ExperimentConfig& config, int threads) {
  require(scenario.mode != CsiMode::optimal, "analytic_average: no closed form for max-min beamforming");
  const long layouts =
      scenario.placement == Placement::resampled ? std::min(config.analytic_layouts, config.trials) : 1;
  const Spectrum spectrum = hermitian_evd(scenario.coupling.correlation);
  AnalyticOptions options;
  options.eta = config.eta;
  options.beta_mode = config.beta;
  options.matching = config.moments;
  const SystemConfig& sys = scenario.system;
  std::vector<double> per_layout(static_cast<std::size_t>(layouts));
  parallel_for(layouts, resolve_thread_count(threads), [&](long t) {
    const UserLayout layout = trial_layout(scenario, config.seed, static_cast<std::uint64_t>(t));
    const double rho = trial_tx_power(scenario, layout) / (sys.num_elements * sys.noise_power_w);
    const std::vector<double> rates = analytic_user_throughputs(
        spectrum, scenario.coupling.correlation, layout.variances, rho, scenario.mode, options);
    CompensatedSum sum;
    for (double r : rates) sum.add(r);
    per_layout[static_cast<std::size_t>(t)] = sum.value() / static_cast<double>(rates.size());
  });
  CompensatedSum total;
  for (double v : per_layout) total.add(v);
  return total.value() / static_cast<double>(layouts);
}

std::vector<GridPoint> expand_grid(const ExperimentConfig& config) {
  const bool sweep_m = config.sweep == SweepVariable::num_elements;
  const bool sweep_k = config.sweep == SweepVariable::num_users;
  const bool sweep_snr = config.sweep == SweepVariable::snr_db;
  const bool sweep_err = config.sweep == SweepVariable::csi_error_db;
  const std::vector<int> ms = sweep_m ? std::vector<int>{0} : config.num_elements;
  const std::vector<int> ks = sweep_k ? std::vector<int>{0} : config.num_users;
  const std::vector<double> snrs = sweep_snr ? std::vector<double>{0.0} : config.snr_db;
  std::vector<std::optional<double>> errs;
  if (sweep_err || config.csi_error_db.empty()) {
    errs.push_back(std::nullopt);
  } else {
    for (double e : config.csi_error_db) errs.push_back(e);
  }

  std::vector<GridPoint> out;
  for (int m : ms) {
    for (int k : ks) {
      for (double snr : snrs) {
        for (const auto& err : errs) {
          for (double x : config.sweep_values) {
            GridPoint p{m, k, snr, err, x};
            if (sweep_m) p.num_elements = static_cast<int>(x);
            if (sweep_k) p.num_users = static_cast<int>(x);
            if (sweep_snr) p.snr_db = x;
            if (sweep_err) p.csi_error_db = x;
            out.push_back(p);
          }
        }
      }
    }
  }
  return out;
}

std::vector<ResultRow> run_experiment(const ExperimentConfig& config, int threads, std::ostream* log,
                                      Unit log_unit) {
  config.validate();
  require(config.experiment != "validate", "run_experiment: the validate experiment has no CSV rows");
  const int workers = resolve_thread_count(threads);
  std::map<int, CouplingModel> couplings;
  std::vector<ResultRow> rows;
  const std::vector<GridPoint> grid = expand_grid(config);
  for (CsiMode mode : config.modes) {
    for (const GridPoint& p : grid) {
      auto it = couplings.find(p.num_elements);
      if (it == couplings.end()) it = couplings.emplace(p.num_elements, build_coupling(config, p.num_elements)).first;
      const Scenario sc = make_scenario(config, p, mode, it->second);

      ResultRow row;
      row.experiment = config.experiment;
      row.seed = config.seed;
      row.mode = mode;
      row.num_elements = p.num_elements;
      row.num_users = p.num_users;
      row.snr_db = p.snr_db;
      row.x_name = std::string(to_string(config.sweep));
      row.x_value = p.x_value;

      const MonteCarloResult mc = estimate_throughput_mc(sc, config.trials, config.seed, workers);
      row.mc_mean_nats = mc.average.mean;
      row.mc_ci95 = mc.average.half_width_95;
      if (mc.t_star) row.solver_t_star = mc.t_star->mean;
      if (config.analytic && mode != CsiMode::optimal && !p.csi_error_db) {
        try {
          row.analytic_nats = analytic_average(sc, config, workers);
        } catch (const NumericalError& e) {
          if (log) *log << "  analytic value skipped: " << e.what() << "\n";
        }
      }
      if (log) {
        const char* unit = log_unit == Unit::bits ? " bits" : " nats";
        *log << config.experiment << " " << to_string(mode) << " M=" << p.num_elements << " K=" << p.num_users;
        if (config.sweep != SweepVariable::snr_db) *log << " snr_db=" << p.snr_db;
        if (p.csi_error_db && config.sweep != SweepVariable::csi_error_db) *log << " csi_error_db=" << *p.csi_error_db;
        *log << " " << row.x_name << "=" << p.x_value << " mc=" << from_nats(*row.mc_mean_nats, log_unit);
        if (row.analytic_nats) *log << " analytic=" << from_nats(*row.analytic_nats, log_unit);
        *log << unit << "\n";
      }
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

std::string format_csv(const std::vector<ResultRow>& rows) {
  std::string out = std::string(kCsvHeader) + "\n";
  for (const ResultRow& r : rows) {
    out += r.experiment + "," + std::to_string(r.seed) + "," + std::string(to_string(r.mode)) + "," +
           std::to_string(r.num_elements) + "," + std::to_string(r.num_users) + "," + number(r.snr_db) + "," +
           r.x_name + "," + number(r.x_value) + "," + optional_number(r.analytic_nats) + "," +
           optional_number(r.mc_mean_nats) + "," + optional_number(r.mc_ci95) + "," +
           optional_number(r.solver_t_star) + "\n";
  }
  return out;
}

OutputFiles write_outputs(const ExperimentConfig& config, const std::vector<ResultRow>& rows) {
  std::error_code ec;
  std::filesystem::create_directories(config.output_dir, ec);
  if (ec) {
    throw InvalidArgument("cannot create output directory '" + config.output_dir.string() + "': " + ec.message());
  }
  OutputFiles files{config.output_dir / (config.name + ".csv"), config.output_dir / (config.name + ".meta")};
  auto write = [](const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out << text;
    out.close();
    if (!out) throw InvalidArgument("cannot write '" + path.string() + "'");
  };
  write(files.csv, format_csv(rows));
  write(files.meta, "config_hash = " + config_hash(config) + "\nseed = " + std::to_string(config.seed) +
                        "\nrows = " + std::to_string(rows.size()) + "\n\n" + to_ini(config));
  return files;
}

}  // namespace hmimo
