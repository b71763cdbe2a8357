// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The hmimo Authors

#ifndef HMIMO_GEOMETRY_HPP
#define HMIMO_GEOMETRY_HPP

#include <array>
#include <cstdint>
#include <vector>

#include "hmimo/types.hpp"

namespace hmimo {

/// Scalar parameters of one downlink scenario.
struct SystemConfig {
  int num_elements = 16;           ///< M
  int num_users = 8;               ///< K
  double tx_power_w = 1.0;         ///< P
  double noise_power_w = 3.981071705534972e-14;  ///< N0 (-104 dBm)
  double wavelength_m = kSpeedOfLight / 1.6e9;
  double pathloss_exponent = 3.5;
  double cell_radius_m = 500.0;
  double min_user_distance_m = 10.0;
  /// Distance at which the large-scale gain is unity: sigma^2 = (d / d_ref)^-alpha.
  double pathloss_reference_m = 1.0;
  std::uint64_t seed = 1;

  /// rho = P / (M N0), always recomputed.
  double rho() const { return tx_power_w / (num_elements * noise_power_w); }

  void validate() const;
};

enum class ArrayMode { fixed_aperture, fixed_spacing };
/// `square` needs a perfect-square M; `rectangle` uses the most nearly square
/// rows x cols factorization of M (8 x 16 for 128).
enum class ArrayShape { square, rectangle, line };

using Point2 = std::array<double, 2>;

struct ArrayGeometry {
  std::vector<Point2> positions;
  ArrayMode mode = ArrayMode::fixed_spacing;
  ArrayShape shape = ArrayShape::square;
  /// Aperture side in fixed-aperture mode, element spacing otherwise.
  double dimension_m = 0.0;
  /// Spacing between adjacent elements along an axis.
  double spacing_m = 0.0;

  int size() const { return static_cast<int>(positions.size()); }
};

/// Grid of M elements. In fixed-aperture mode the outer elements sit on the
/// boundary of a square of side `dimension_m`; in fixed-spacing mode adjacent
/// elements are `dimension_m` apart.
ArrayGeometry build_array_geometry(int num_elements, ArrayMode mode, double dimension_m,
                                   ArrayShape shape = ArrayShape::square);

/// Integer square root of n, or -1 when n is not a perfect square.
int exact_sqrt(int n);

struct UserLayout {
  std::vector<double> distances_m;
  std::vector<double> variances;  ///< sigma_k^2

  int size() const { return static_cast<int>(variances.size()); }
};

/// Large-scale gain at distance d: (d / d_ref)^-alpha.
double pathloss_variance(double distance_m, double exponent, double reference_m = 1.0);

/// Area-uniform placement in a disk: r = R sqrt(u), u ~ U(0, 1], floored at
/// the minimum distance.
UserLayout place_users(const SystemConfig& config, Rng& rng);

/// Layout from explicit distances (same pathloss law).
UserLayout layout_from_distances(const std::vector<double>& distances_m, double exponent,
                                 double reference_m = 1.0);

/// All users share one large-scale gain.
UserLayout equal_gain_layout(int num_users, double variance = 1.0);

}  // namespace hmimo

#endif  // HMIMO_GEOMETRY_HPP
