// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The hmimo Authors

#include "hmimo/monte_carlo.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>

#include "hmimo/random.hpp"

namespace hmimo {
namespace {

// Stream index reserved for the shared layout of fixed placement.
constexpr std::uint64_t kFixedLayoutStream = 0xF1E5'0000'0000'0001ULL;

struct TrialOutcome {
  std::vector<double> sinr;
  double t_star = 0.0;
};

TrialOutcome run_trial(const Scenario& sc, std::uint64_t seed, std::uint64_t trial) {
  const SystemConfig& sys = sc.system;
  const UserLayout layout = trial_layout(sc, seed, trial);
  Rng fading_rng = make_substream(seed, trial, Substream::fading);
  const CMatrix h = effective_channel(draw_channel(layout, sys.num_elements, fading_rng), sc.coupling);
  const double power = trial_tx_power(sc, layout);
  CMatrix known = h;
  if (sc.csi_error_db) {
    const double variance = error_variance_from_db(
        *sc.csi_error_db, expected_entry_power(layout, sc.coupling), sc.error_reference);
    Rng error_rng = make_substream(seed, trial, Substream::csi_error);
    known = corrupt_csi(h, variance, error_rng);
  }
  TrialOutcome out;
  switch (sc.mode) {
    case CsiMode::full:
      out.sinr = sinr_per_user(h, mf_precoder_full(known, power, sc.mf_scaling), sys.noise_power_w);
      break;
    case CsiMode::partial:
      out.sinr = sinr_per_user(
          h, mf_precoder_partial(sc.coupling, layout.variances, power, sc.mf_scaling),
          sys.noise_power_w);
      break;
    case CsiMode::none:
      out.sinr = sinr_no_csi(
          h, mf_precoder_no_csi(sc.coupling, sys.num_users, power, sc.mf_scaling),
          sys.noise_power_w, sc.no_csi);
      break;
    case CsiMode::optimal: {
      const BeamformerSolution sol =
          maxmin_beamforming(known, power, sys.noise_power_w, sc.maxmin);
      out.sinr = sinr_per_user(h, sol.precoder, sys.noise_power_w);
      out.t_star = sol.t_star;
      break;
    }
  }
  return out;
}

}  // namespace

std::string_view to_string(Placement placement) {
  switch (placement) {
    case Placement::resampled: return "resampled";
    case Placement::fixed: return "fixed";
    case Placement::equal_gain: return "equal_gain";
  }
  return "resampled";
}

Placement placement_from_string(std::string_view name) {
  if (name == "resampled") return Placement::resampled;
  if (name == "fixed") return Placement::fixed;
  if (name == "equal_gain") return Placement::equal_gain;
  throw InvalidArgument("unknown placement '" + std::string(name) +
                        "' (expected resampled, fixed or equal_gain)");
}

double trial_tx_power(const Scenario& scenario, const UserLayout& layout) {
  if (!scenario.received_snr_db) return scenario.system.tx_power_w;
  return db_to_linear(*scenario.received_snr_db) * scenario.system.noise_power_w /
         expected_entry_power(layout, scenario.coupling);
}

UserLayout trial_layout(const Scenario& scenario, std::uint64_t seed, std::uint64_t trial) {
  const SystemConfig& sys = scenario.system;
  switch (scenario.placement) {
    case Placement::resampled: {
      Rng rng = make_substream(seed, trial, Substream::users);
      return place_users(sys, rng);
    }
    case Placement::fixed: {
      Rng rng = make_substream(seed, kFixedLayoutStream, Substream::users);
      return place_users(sys, rng);
    }
    case Placement::equal_gain: {
      UserLayout layout = layout_from_distances(
          std::vector<double>(static_cast<std::size_t>(sys.num_users), sys.cell_radius_m),
          sys.pathloss_exponent, sys.pathloss_reference_m);
      return layout;
    }
  }
  throw InvalidArgument("unknown placement");
}

int resolve_thread_count(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("HMIMO_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0 && v <= 4096) return static_cast<int>(v);
    throw InvalidArgument(std::string("HMIMO_THREADS must be a positive integer, got '") + env + "'");
  }
  return static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
}

void parallel_for(long n, int threads, const std::function<void(long)>& body) {
  const int workers = static_cast<int>(std::min<long>(std::max(1, threads), std::max(1L, n)));
  if (workers <= 1) {
    for (long i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<long> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(workers));
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (long i = next++; i < n; i = next++) {
        try {
          body(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!error) error = std::current_exception();
          next = n;
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

MonteCarloResult estimate_throughput_mc(const Scenario& scenario, long n_trials, std::uint64_t seed,
                                        int threads) {
  require(n_trials >= 2, "estimate_throughput_mc: need at least two trials");
  scenario.system.validate();
  require(scenario.coupling.size() == scenario.system.num_elements,
          "estimate_throughput_mc: coupling model size differs from M");
  const int k = scenario.system.num_users;
  std::vector<TrialOutcome> outcomes(static_cast<std::size_t>(n_trials));
  parallel_for(n_trials, resolve_thread_count(threads), [&](long t) {
    outcomes[static_cast<std::size_t>(t)] = run_trial(scenario, seed, static_cast<std::uint64_t>(t));
  });

  std::vector<double> average(static_cast<std::size_t>(n_trials));
  std::vector<std::vector<double>> per_user(static_cast<std::size_t>(k),
                                            std::vector<double>(static_cast<std::size_t>(n_trials)));
  std::vector<double> t_star(static_cast<std::size_t>(n_trials));
  for (long t = 0; t < n_trials; ++t) {
    const TrialOutcome& o = outcomes[static_cast<std::size_t>(t)];
    CompensatedSum sum;
    for (int u = 0; u < k; ++u) {
      const double rate = std::log1p(o.sinr[static_cast<std::size_t>(u)]);
      per_user[static_cast<std::size_t>(u)][static_cast<std::size_t>(t)] = rate;
      sum.add(rate);
    }
    average[static_cast<std::size_t>(t)] = sum.value() / k;
    t_star[static_cast<std::size_t>(t)] = o.t_star;
  }
  MonteCarloResult result;
  result.average = summarize(average);
  for (const auto& u : per_user) result.per_user.push_back(summarize(u));
  if (scenario.mode == CsiMode::optimal) result.t_star = summarize(t_star);
  return result;
}

std::vector<double> sample_user_sinr(const Scenario& scenario, int user, long n_trials,
                                     std::uint64_t seed, int threads) {
  require(user >= 0 && user < scenario.system.num_users, "sample_user_sinr: user out of range");
  std::vector<double> out(static_cast<std::size_t>(n_trials));
  parallel_for(n_trials, resolve_thread_count(threads), [&](long t) {
    out[static_cast<std::size_t>(t)] =
        run_trial(scenario, seed, static_cast<std::uint64_t>(t)).sinr[static_cast<std::size_t>(user)];
  });
  return out;
}

std::vector<double> sample_equivalent_sinr(const RVector& eigenvalues, double sigma_k2,
                                           std::span<const double> interferer_variances,
                                           double rho, long n, std::uint64_t seed, int threads) {
  std::vector<double> out(static_cast<std::size_t>(n));
  parallel_for(n, resolve_thread_count(threads), [&](long t) {
    Rng rng = make_substream(seed, static_cast<std::uint64_t>(t), Substream::fading);
    out[static_cast<std::size_t>(t)] =
        sinr_equivalent_sample(eigenvalues, sigma_k2, interferer_variances, rho, rng);
  });
  return out;
}

}  // namespace hmimo
