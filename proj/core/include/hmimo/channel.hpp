// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The hmimo Authors

#ifndef HMIMO_CHANNEL_HPP
#define HMIMO_CHANNEL_HPP

#include <optional>

#include "hmimo/coupling.hpp"
#include "hmimo/geometry.hpp"
#include "hmimo/types.hpp"

namespace hmimo {

struct ChannelRealization {
  CMatrix fading;     ///< A, K x M
  CMatrix effective;  ///< H = A C I
  std::optional<CMatrix> estimate;  ///< H_hat = H + E
  double error_variance = 0.0;

  /// Channel the transmitter designs with.
  const CMatrix& known() const { return estimate ? *estimate : effective; }
};

/// A(k, m) = sigma_k (g1 + j g2) / sqrt(2).
CMatrix draw_channel(const UserLayout& layout, int num_elements, Rng& rng);

/// H = A R.
CMatrix effective_channel(const CMatrix& fading, const CouplingModel& coupling);

/// H + E with E i.i.d. CN(0, error_variance). Zero variance returns H.
CMatrix corrupt_csi(const CMatrix& channel, double error_variance, Rng& rng);

/// How an estimation-error level in dB is turned into an absolute variance.
enum class ErrorReference {
  relative,  ///< sigma_e^2 = 10^(dB/10) * average per-entry power of H
  absolute,  ///< sigma_e^2 = 10^(dB/10)
};

/// `reference_power` is the average per-entry power of H; ignored in
/// absolute mode.
double error_variance_from_db(double error_db, double reference_power, ErrorReference reference);

/// Ensemble average of |H_{k,m}|^2: mean_k(sigma_k^2) * trace(Q) / M.
double expected_entry_power(const UserLayout& layout, const CouplingModel& coupling);

/// Sample average of |H_{k,m}|^2 of one realization.
double mean_entry_power(const CMatrix& channel);

}  // namespace hmimo

#endif  // HMIMO_CHANNEL_HPP
