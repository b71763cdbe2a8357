// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The hmimo Authors

#ifndef HMIMO_MONTE_CARLO_HPP
#define HMIMO_MONTE_CARLO_HPP

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "hmimo/channel.hpp"
#include "hmimo/coupling.hpp"
#include "hmimo/geometry.hpp"
#include "hmimo/maxmin.hpp"
#include "hmimo/precoding.hpp"
#include "hmimo/statistics.hpp"

namespace hmimo {

/// How users are placed across trials.
enum class Placement {
  resampled,   ///< fresh area-uniform placement in every trial
  fixed,       ///< one placement drawn from the master seed, reused
  equal_gain,  ///< every user at the cell edge
};

std::string_view to_string(Placement placement);
Placement placement_from_string(std::string_view name);

/// Everything one Monte Carlo run needs besides the trial count and seed.
struct Scenario {
  SystemConfig system;
  CouplingModel coupling;
  CsiMode mode = CsiMode::full;
  Placement placement = Placement::resampled;
  std::optional<double> csi_error_db;
  /// When set, P is chosen per trial so that rho * mean(sigma_k^2) * tr(Q)
  /// equals this value and system.tx_power_w is ignored.
  std::optional<double> received_snr_db;
  ErrorReference error_reference = ErrorReference::relative;
  MfScaling mf_scaling = MfScaling::per_element;
  NoCsiInterference no_csi = NoCsiInterference::single_term;
  MaxMinOptions maxmin{};
};

/// Transmit power for a layout: system.tx_power_w, or the power that hits
/// the received SNR target.
double trial_tx_power(const Scenario& scenario, const UserLayout& layout);

/// Layout used by `trial` (the same one for every trial unless resampled).
UserLayout trial_layout(const Scenario& scenario, std::uint64_t seed, std::uint64_t trial);

struct MonteCarloResult {
  McEstimate average;                ///< per-trial mean over users of ln(1 + SINR), nats
  std::vector<McEstimate> per_user;
  std::optional<McEstimate> t_star;  ///< max-min SINR, optimal mode only
};

/// Thread count: `requested` if positive, else HMIMO_THREADS, else the
/// hardware concurrency.
int resolve_thread_count(int requested = 0);

/// Runs body(i) for i in [0, n) on `threads` workers. Exceptions are
/// rethrown on the calling thread.
void parallel_for(long n, int threads, const std::function<void(long)>& body);

/// Average throughput over `n_trials` trials. Trial t draws from streams
/// derived from (seed, t) only, and results are reduced in trial order, so
/// the output does not depend on the thread count.
MonteCarloResult estimate_throughput_mc(const Scenario& scenario, long n_trials, std::uint64_t seed,
                                        int threads = 0);

/// SINR of one user in every trial.
std::vector<double> sample_user_sinr(const Scenario& scenario, int user, long n_trials,
                                     std::uint64_t seed, int threads = 0);

/// Draws of the equivalent SINR for one user.
std::vector<double> sample_equivalent_sinr(const RVector& eigenvalues, double sigma_k2,
                                           std::span<const double> interferer_variances,
                                           double rho, long n, std::uint64_t seed, int threads = 0);

}  // namespace hmimo

#endif  // HMIMO_MONTE_CARLO_HPP
