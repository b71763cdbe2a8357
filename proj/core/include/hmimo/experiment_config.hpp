// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The hmimo Authors

#ifndef HMIMO_EXPERIMENT_CONFIG_HPP
#define HMIMO_EXPERIMENT_CONFIG_HPP

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "hmimo/analytic.hpp"
#include "hmimo/channel.hpp"
#include "hmimo/coupling.hpp"
#include "hmimo/geometry.hpp"
#include "hmimo/monte_carlo.hpp"
#include "hmimo/precoding.hpp"

namespace hmimo {

enum class SnrReference { transmit, received };
enum class SweepVariable { snr_db, num_elements, num_users, csi_error_db };

std::string_view to_string(SweepVariable v);

/// One experiment run. Every field has a catalog default, so a config file
/// only lists what it changes. See `to_ini` for the key names.
struct ExperimentConfig {
  std::string experiment;  ///< catalog id
  std::string name;        ///< output file stem, defaults to the id
  std::uint64_t seed = 1;
  long trials = 1000;
  std::filesystem::path output_dir = "results";

  SweepVariable sweep = SweepVariable::snr_db;
  std::vector<double> sweep_values;

  // Series axes. The swept one is replaced by sweep_values.
  std::vector<int> num_elements{16};
  std::vector<int> num_users{8};
  std::vector<double> snr_db{10.0};
  std::vector<double> csi_error_db;  ///< empty: perfect CSI
  SnrReference snr_reference = SnrReference::transmit;
  ErrorReference error_reference = ErrorReference::relative;

  double noise_dbm = -104.0;
  double carrier_ghz = 1.6;
  double pathloss_exponent = 3.5;
  double pathloss_reference_m = 500.0;
  double cell_radius_m = 500.0;
  double min_distance_m = 10.0;
  Placement placement = Placement::resampled;

  ArrayMode array_mode = ArrayMode::fixed_spacing;
  ArrayShape array_shape = ArrayShape::rectangle;
  double spacing_wavelengths = 0.5;
  double aperture_m = 1.0;
  SincConvention sinc = SincConvention::unnormalized;

  std::vector<CsiMode> modes{CsiMode::full};
  MfScaling mf_scaling = MfScaling::per_element;
  NoCsiInterference no_csi = NoCsiInterference::single_term;
  double maxmin_tolerance = 1e-8;

  bool analytic = false;
  long analytic_layouts = 200;
  EtaConvention eta = EtaConvention::matched;
  BetaMode beta = BetaMode::row_sums;
  MomentMatching moments = MomentMatching::exact;

  /// Throws InvalidArgument on any inconsistency.
  void validate() const;

  bool operator==(const ExperimentConfig&) const = default;
};

/// Ids accepted by `experiment.id`.
const std::vector<std::string>& experiment_ids();

/// One-paragraph description of a catalog entry.
std::string describe_experiment(std::string_view id);

/// Catalog defaults for an id.
ExperimentConfig default_config(std::string_view id);

/// Parses INI text. `experiment.id` is required; every other key overrides
/// the catalog default and unknown keys are an error.
ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::filesystem::path& path);

/// Canonical INI form with every key spelled out. parse_config inverts it.
std::string to_ini(const ExperimentConfig& config);

/// FNV-1a 64 of the canonical form, as 16 hex digits.
std::string config_hash(const ExperimentConfig& config);

/// "a, b, lo:step:hi" lists. Ranges include hi when it lies on the grid.
std::vector<double> parse_number_list(std::string_view text);

}  // namespace hmimo

#endif  // HMIMO_EXPERIMENT_CONFIG_HPP
