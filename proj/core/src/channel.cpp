// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The hmimo Authors

#include "hmimo/channel.hpp"

#include <cmath>
#include <numbers>

namespace hmimo {

CMatrix draw_channel(const UserLayout& layout, int num_elements, Rng& rng) {
  require(num_elements >= 1, "draw_channel: M must be >= 1");
  std::normal_distribution<double> normal(0.0, 1.0);
  const int k_users = layout.size();
  CMatrix a(k_users, num_elements);
  for (int k = 0; k < k_users; ++k) {
    require(layout.variances[k] > 0.0, "draw_channel: variances must be positive");
    const double scale = std::sqrt(layout.variances[k] / 2.0);
    for (int m = 0; m < num_elements; ++m) {
      const double re = normal(rng);
      const double im = normal(rng);
      a(k, m) = cdouble(scale * re, scale * im);
    }
  }
  return a;
}

CMatrix effective_channel(const CMatrix& fading, const CouplingModel& coupling) {
  require(fading.cols() == coupling.combined.rows(), "effective_channel: dimension mismatch");
  return fading * coupling.combined;
}

CMatrix corrupt_csi(const CMatrix& channel, double error_variance, Rng& rng) {
  require(error_variance >= 0.0, "corrupt_csi: error variance must be nonnegative");
  if (error_variance == 0.0) return channel;
  std::normal_distribution<double> normal(0.0, 1.0);
  const double scale = std::sqrt(error_variance / 2.0);
  CMatrix out = channel;
  for (Eigen::Index k = 0; k < out.rows(); ++k) {
    for (Eigen::Index m = 0; m < out.cols(); ++m) {
      const double re = normal(rng);
      const double im = normal(rng);
      out(k, m) += cdouble(scale * re, scale * im);
    }
  }
  return out;
}

double error_variance_from_db(double error_db, double reference_power, ErrorReference reference) {
  const double level = db_to_linear(error_db);
  if (reference == ErrorReference::absolute) return level;
  require(reference_power > 0.0, "error_variance_from_db: reference power must be positive");
  return level * reference_power;
}

double expected_entry_power(const UserLayout& layout, const CouplingModel& coupling) {
  require(layout.size() > 0, "expected_entry_power: empty layout");
  double mean_var = 0.0;
  for (double v : layout.variances) mean_var += v;
  mean_var /= layout.size();
  return mean_var * coupling.correlation.trace().real() / coupling.size();
}

double mean_entry_power(const CMatrix& channel) {
  require(channel.size() > 0, "mean_entry_power: empty channel");
  return channel.squaredNorm() / static_cast<double>(channel.size());
}

}  // namespace hmimo
