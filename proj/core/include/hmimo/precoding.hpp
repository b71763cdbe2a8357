// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The hmimo Authors

#ifndef HMIMO_PRECODING_HPP
#define HMIMO_PRECODING_HPP

#include <span>
#include <vector>

#include "hmimo/coupling.hpp"
#include "hmimo/types.hpp"

namespace hmimo {

struct Precoder {
  CMatrix w;  ///< M x K, column k serves user k
  CsiMode mode = CsiMode::full;
  double power_used = 0.0;  ///< squared Frobenius norm of w
};

/// Matched-filter scaling.
enum class MfScaling {
  per_element,  ///< W = sqrt(P / M) H^H; power follows the channel energy
  total_power,  ///< W rescaled so that ||W||_F^2 = P exactly
};

/// Column k = sqrt(P/M) h_k^H, built from the channel the transmitter knows.
Precoder mf_precoder_full(const CMatrix& h_known, double power_w,
                          MfScaling scaling = MfScaling::per_element);

/// Column k = sqrt(P/M) sigma_k (1 R)^H.
Precoder mf_precoder_partial(const CouplingModel& coupling, std::span<const double> variances,
                             double power_w, MfScaling scaling = MfScaling::per_element);

/// Every column = sqrt(P/M) (1 R)^H.
Precoder mf_precoder_no_csi(const CouplingModel& coupling, int num_users, double power_w,
                            MfScaling scaling = MfScaling::per_element);

/// SINR_k = |h_k w_k|^2 / (N0 + sum_{j != k} |h_k w_j|^2) on the true channel.
std::vector<double> sinr_per_user(const CMatrix& h_true, const Precoder& precoder,
                                  double noise_power_w);

/// Interference model for the no-CSI matched filter.
enum class NoCsiInterference {
  /// gamma_k = rho X / (1 + rho X): one interference term of the user's own
  /// beam gain, the form the closed-form no-CSI expression describes.
  single_term,
  /// The shared beam is sent once per user, so every other user's stream
  /// adds the same gain: gamma_k = rho X / (1 + rho (K - 1) X).
  shared_beam,
};

/// No-CSI SINR under the chosen interference model. With `shared_beam`
/// this equals sinr_per_user on mf_precoder_no_csi.
std::vector<double> sinr_no_csi(const CMatrix& h_true, const Precoder& precoder,
                                double noise_power_w, NoCsiInterference model);

/// One draw of the equivalent SINR rho X1^2 / (1 + rho X2 Y).
double sinr_equivalent_sample(const RVector& eigenvalues, double sigma_k2,
                              std::span<const double> interferer_variances, double rho, Rng& rng);

}  // namespace hmimo

#endif  // HMIMO_PRECODING_HPP
