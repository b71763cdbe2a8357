// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The hmimo Authors

#include "hmimo/precoding.hpp"

#include <cmath>

namespace hmimo {
namespace {

Precoder finish(CMatrix w, CsiMode mode, double power_w, MfScaling scaling) {
  double power = w.squaredNorm();
  if (!(power > 0.0)) throw InvalidArgument("precoder: channel is zero");
  if (scaling == MfScaling::total_power) {
    w *= std::sqrt(power_w / power);
    power = w.squaredNorm();
  }
  return {std::move(w), mode, power};
}

void check_power(double power_w) {
  require(std::isfinite(power_w) && power_w > 0.0, "precoder: power must be positive");
}

CVector common_beam(const CouplingModel& coupling) {
  // (1 R)^H: conjugated column sums of R.
  return coupling.combined.colwise().sum().adjoint();
}

}  // namespace

Precoder mf_precoder_full(const CMatrix& h_known, double power_w, MfScaling scaling) {
  check_power(power_w);
  require(h_known.rows() > 0 && h_known.cols() > 0, "precoder: empty channel");
  const double m = static_cast<double>(h_known.cols());
  return finish(std::sqrt(power_w / m) * h_known.adjoint(), CsiMode::full, power_w, scaling);
}

Precoder mf_precoder_partial(const CouplingModel& coupling, std::span<const double> variances,
                             double power_w, MfScaling scaling) {
  check_power(power_w);
  require(!variances.empty(), "precoder: no users");
  const int m = coupling.size();
  const CVector beam = std::sqrt(power_w / m) * common_beam(coupling);
  CMatrix w(m, static_cast<Eigen::Index>(variances.size()));
  for (std::size_t k = 0; k < variances.size(); ++k) {
    require(variances[k] > 0.0, "precoder: variances must be positive");
    w.col(static_cast<Eigen::Index>(k)) = std::sqrt(variances[k]) * beam;
  }
  return finish(std::move(w), CsiMode::partial, power_w, scaling);
}

Precoder mf_precoder_no_csi(const CouplingModel& coupling, int num_users, double power_w,
                            MfScaling scaling) {
  check_power(power_w);
  require(num_users >= 1, "precoder: no users");
  const int m = coupling.size();
  const CVector beam = std::sqrt(power_w / m) * common_beam(coupling);
  return finish(beam.replicate(1, num_users), CsiMode::none, power_w, scaling);
}

std::vector<double> sinr_per_user(const CMatrix& h_true, const Precoder& precoder,
                                  double noise_power_w) {
  require(h_true.cols() == precoder.w.rows() && h_true.rows() == precoder.w.cols(),
          "sinr: channel and precoder dimensions disagree");
  require(noise_power_w > 0.0, "sinr: noise power must be positive");
  const RMatrix gains = (h_true * precoder.w).cwiseAbs2();
  std::vector<double> out(static_cast<std::size_t>(gains.rows()));
  for (Eigen::Index k = 0; k < gains.rows(); ++k) {
    const double signal = gains(k, k);
    const double interference = gains.row(k).sum() - signal;
    out[static_cast<std::size_t>(k)] = signal / (noise_power_w + std::max(interference, 0.0));
  }
  return out;
}

std::vector<double> sinr_no_csi(const CMatrix& h_true, const Precoder& precoder,
                                double noise_power_w, NoCsiInterference model) {
  if (model == NoCsiInterference::shared_beam) return sinr_per_user(h_true, precoder, noise_power_w);
  require(h_true.cols() == precoder.w.rows() && h_true.rows() == precoder.w.cols(),
          "sinr: channel and precoder dimensions disagree");
  require(noise_power_w > 0.0, "sinr: noise power must be positive");
  std::vector<double> out(static_cast<std::size_t>(h_true.rows()));
  for (Eigen::Index k = 0; k < h_true.rows(); ++k) {
    const double gain = std::norm(h_true.row(k).dot(precoder.w.col(k).conjugate()));
    out[static_cast<std::size_t>(k)] = gain / (noise_power_w + gain);
  }
  return out;
}

double sinr_equivalent_sample(const RVector& eigenvalues, double sigma_k2,
                              std::span<const double> interferer_variances, double rho, Rng& rng) {
  require(sigma_k2 > 0.0 && rho > 0.0, "equivalent SINR: sigma_k^2 and rho must be positive");
  std::exponential_distribution<double> unit(1.0);
  double x1 = 0.0;
  double x2 = 0.0;
  for (Eigen::Index i = 0; i < eigenvalues.size(); ++i) {
    const double a = sigma_k2 * unit(rng);
    x1 += eigenvalues[i] * a;
    x2 += eigenvalues[i] * eigenvalues[i] * a;
  }
  double y = 0.0;
  for (const double v : interferer_variances) y += v * unit(rng);
  return rho * x1 * x1 / (1.0 + rho * x2 * y);
}

}  // namespace hmimo
