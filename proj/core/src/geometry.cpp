// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The hmimo Authors

#include "hmimo/geometry.hpp"

#include <algorithm>
#include <cmath>

namespace hmimo {

std::string_view to_string(CsiMode mode) {
  switch (mode) {
    case CsiMode::full: return "full";
    case CsiMode::partial: return "partial";
    case CsiMode::none: return "none";
    case CsiMode::optimal: return "optimal";
  }
  return "unknown";
}

CsiMode csi_mode_from_string(std::string_view name) {
  if (name == "full") return CsiMode::full;
  if (name == "partial") return CsiMode::partial;
  if (name == "none") return CsiMode::none;
  if (name == "optimal") return CsiMode::optimal;
  throw InvalidArgument("unknown CSI mode '" + std::string(name) + "'");
}

void SystemConfig::validate() const {
  require(num_elements >= 1, "SystemConfig: M must be >= 1");
  require(num_users >= 1, "SystemConfig: K must be >= 1");
  require(tx_power_w > 0.0, "SystemConfig: P must be positive");
  require(noise_power_w > 0.0, "SystemConfig: N0 must be positive");
  require(wavelength_m > 0.0, "SystemConfig: wavelength must be positive");
  require(cell_radius_m > 0.0, "SystemConfig: cell radius must be positive");
  require(min_user_distance_m >= 0.0 && min_user_distance_m <= cell_radius_m,
          "SystemConfig: minimum user distance must lie in [0, cell radius]");
  require(pathloss_reference_m > 0.0, "SystemConfig: pathloss reference must be positive");
}

int exact_sqrt(int n) {
  if (n < 0) return -1;
  int r = static_cast<int>(std::lround(std::sqrt(static_cast<double>(n))));
  while (r * r > n) --r;
  while ((r + 1) * (r + 1) <= n) ++r;
  return r * r == n ? r : -1;
}

ArrayGeometry build_array_geometry(int num_elements, ArrayMode mode, double dimension_m,
                                   ArrayShape shape) {
  require(dimension_m > 0.0, "build_array_geometry: dimension must be positive");
  require(num_elements >= 1, "build_array_geometry: M must be >= 1");
  ArrayGeometry g;
  g.mode = mode;
  g.shape = shape;
  g.dimension_m = dimension_m;

  if (mode == ArrayMode::fixed_aperture) {
    require(shape == ArrayShape::square, "fixed-aperture arrays are square grids");
    const int side = exact_sqrt(num_elements);
    require(side >= 2, "fixed-aperture mode needs a perfect-square M >= 4");
    g.spacing_m = dimension_m / (side - 1);
  } else {
    g.spacing_m = dimension_m;
  }

  if (shape == ArrayShape::line) {
    g.positions.reserve(num_elements);
    for (int m = 0; m < num_elements; ++m) g.positions.push_back({m * g.spacing_m, 0.0});
    return g;
  }

  int rows = exact_sqrt(num_elements);
  if (shape == ArrayShape::rectangle) {
    rows = static_cast<int>(std::sqrt(static_cast<double>(num_elements)));
    while (num_elements % rows != 0) --rows;
  }
  require(rows >= 1, "square grid needs a perfect-square M, got " + std::to_string(num_elements));
  const int cols = num_elements / rows;
  g.positions.reserve(num_elements);
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) g.positions.push_back({c * g.spacing_m, r * g.spacing_m});
  }
  return g;
}

double pathloss_variance(double distance_m, double exponent, double reference_m) {
  require(distance_m > 0.0, "pathloss_variance: distance must be positive");
  return std::pow(distance_m / reference_m, -exponent);
}

UserLayout place_users(const SystemConfig& config, Rng& rng) {
  require(config.num_users >= 1, "place_users: K must be >= 1");
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  std::vector<double> distances(config.num_users);
  for (auto& d : distances) {
    const double u = 1.0 - uniform(rng);  // (0, 1]
    d = std::max(config.cell_radius_m * std::sqrt(u), config.min_user_distance_m);
  }
  return layout_from_distances(distances, config.pathloss_exponent, config.pathloss_reference_m);
}

UserLayout layout_from_distances(const std::vector<double>& distances_m, double exponent,
                                 double reference_m) {
  UserLayout layout;
  layout.distances_m = distances_m;
  layout.variances.reserve(distances_m.size());
  for (double d : distances_m) layout.variances.push_back(pathloss_variance(d, exponent, reference_m));
  return layout;
}

UserLayout equal_gain_layout(int num_users, double variance) {
  require(num_users >= 1, "equal_gain_layout: K must be >= 1");
  require(variance > 0.0, "equal_gain_layout: variance must be positive");
  UserLayout layout;
  layout.distances_m.assign(num_users, 1.0);
  layout.variances.assign(num_users, variance);
  return layout;
}

}  // namespace hmimo
