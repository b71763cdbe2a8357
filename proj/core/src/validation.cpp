// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The hmimo Authors

#include "hmimo/validation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <exception>
#include <functional>
#include <limits>
#include <sstream>

#include "hmimo/analytic.hpp"
#include "hmimo/channel.hpp"
#include "hmimo/coupling.hpp"
#include "hmimo/maxmin.hpp"
#include "hmimo/monte_carlo.hpp"
#include "hmimo/oracles.hpp"
#include "hmimo/precoding.hpp"
#include "hmimo/random.hpp"
#include "hmimo/special_functions.hpp"

namespace hmimo {
namespace {

double rel_err(double got, double want) { return std::abs(got - want) / std::max(std::abs(want), 1e-300); }

struct Fixture {
  SystemConfig system;
  CouplingModel coupling;
  Spectrum spectrum;
  UserLayout layout;
};

Fixture make_fixture(int m, int k, std::uint64_t seed) {
  Fixture f;
  f.system.num_elements = m;
  f.system.num_users = k;
  f.system.pathloss_reference_m = f.system.cell_radius_m;
  const ArrayGeometry geo = build_array_geometry(m, ArrayMode::fixed_spacing, 0.5 * f.system.wavelength_m,
                                                 ArrayShape::rectangle);
  Rng phases = make_substream(seed, 0, Substream::excitation);
  f.coupling = make_coupling_model(coupling_matrix(geo, f.system.wavelength_m), excitation_matrix(m, phases));
  f.spectrum = hermitian_evd(f.coupling.correlation);
  Rng users = make_substream(seed, 0, Substream::users);
  f.layout = place_users(f.system, users);
  return f;
}

void add(ValidationReport& r, std::string name, const std::function<ValidationCheck()>& run) {
  ValidationCheck c;
  try {
    c = run();
  } catch (const std::exception& e) {
    c.achieved = std::numeric_limits<double>::infinity();
    c.detail = std::string("threw: ") + e.what();
  }
  c.name = std::move(name);
  if (c.detail.rfind("threw", 0) != 0) c.passed = c.achieved <= c.tolerance;
  r.checks.push_back(std::move(c));
}

}  // namespace

bool ValidationReport::all_passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const ValidationCheck& c) { return c.passed; });
}

ValidationReport run_validation(std::uint64_t seed, int threads) {
  ValidationReport report;
  const Fixture f = make_fixture(16, 8, seed);
  const double n0 = f.system.noise_power_w;
  const int m = f.system.num_elements;

  add(report, "scaled upper incomplete gamma vs integral", [] {
    double worst = 0.0;
    for (double a : {-3.5, -0.5, 0.5, 2.5}) {
      for (double x : {0.3, 2.0, 25.0}) {
        worst = std::max(worst, rel_err(special::upper_incomplete_gamma_scaled(a, x),
                                        oracle::upper_incomplete_gamma_scaled(a, x)));
      }
    }
    return ValidationCheck{{}, worst, 1e-10, false, "12 points, a in [-3.5, 2.5]"};
  });

  add(report, "exponential integral E1 vs integral", [] {
    double worst = 0.0;
    for (double x : {1e-3, 0.7, 5.0, 60.0}) {
      worst = std::max(worst, rel_err(special::exponential_integral_e1(x), oracle::exponential_integral_e1(x)));
    }
    return ValidationCheck{{}, worst, 1e-12, false, "x in {1e-3, 0.7, 5, 60}"};
  });

  add(report, "partial-CSI closed form vs quadrature", [&] {
    double worst = 0.0;
    for (double snr : {-10.0, 10.0, 30.0}) {
      const double rho = db_to_linear(snr) / m;
      for (int k = 0; k < f.system.num_users; ++k) {
        const double s2 = f.layout.variances[static_cast<std::size_t>(k)];
        const auto others = interferer_variances(f.layout.variances, k);
        const double g2 = variance_sum(others, 2);
        const ExpApproxParams beta = beta_parameter(f.coupling.correlation, s2);
        const double closed = std::expm1(throughput_partial_csi(beta, s2, g2, rho).value);
        worst = std::max(worst, rel_err(closed, oracle::partial_csi_sigma(beta.beta, s2, g2, rho)));
      }
    }
    return ValidationCheck{{}, worst, 1e-8, false, "M=16, K=8, 3 SNRs, every user"};
  });

  add(report, "no-CSI closed form vs quadrature", [&] {
    double worst = 0.0;
    for (double snr : {-10.0, 10.0, 30.0}) {
      const double rho = db_to_linear(snr) / m;
      for (int k = 0; k < f.system.num_users; ++k) {
        const ExpApproxParams beta =
            beta_parameter(f.coupling.correlation, f.layout.variances[static_cast<std::size_t>(k)]);
        const double closed = std::expm1(throughput_no_csi(beta, rho).value);
        worst = std::max(worst, rel_err(closed, oracle::no_csi_sigma(beta.beta, rho)));
      }
    }
    return ValidationCheck{{}, worst, 1e-8, false, "M=16, K=8, 3 SNRs, every user"};
  });

  add(report, "full-CSI double series vs 2-D quadrature", [&] {
    const auto eq = equal_gain_layout(8, 1.0);
    const auto others = interferer_variances(eq.variances, 0);
    const GammaApproxParams p = moment_match_gamma(f.spectrum, 1.0, others);
    const double rho = db_to_linear(10.0) / m;
    return ValidationCheck{{}, rel_err(full_csi_sigma(p, rho).value, oracle::full_csi_sigma(p, rho)), 1e-4, false,
                           "M=16, K=8, cell edge, 10 dB"};
  });

  add(report, "gamma fit means vs sampled quadratic forms", [&] {
    const int k = 0;
    const double s2 = f.layout.variances[0];
    const auto others = interferer_variances(f.layout.variances, k);
    const GammaApproxParams p = moment_match_gamma(f.spectrum, s2, others);
    Rng rng = make_stream(seed, 0x5a17);
    std::exponential_distribution<double> unit(1.0);
    const long n = 100000;
    std::vector<double> x1(n), x3(n);
    for (long t = 0; t < n; ++t) {
      double a1 = 0.0, a2 = 0.0, y = 0.0;
      for (Eigen::Index i = 0; i < f.spectrum.eigenvalues.size(); ++i) {
        const double a = s2 * unit(rng);
        a1 += f.spectrum.eigenvalues[i] * a;
        a2 += f.spectrum.eigenvalues[i] * f.spectrum.eigenvalues[i] * a;
      }
      for (double v : others) y += v * unit(rng);
      x1[static_cast<std::size_t>(t)] = a1;
      x3[static_cast<std::size_t>(t)] = a2 * y;
    }
    const double e1 = rel_err(empirical_moments(x1).mean, p.nu * p.theta);
    const double e3 = rel_err(empirical_moments(x3).mean, p.mu * p.phi);
    return ValidationCheck{{}, std::max(e1, e3), 0.02, false, "1e5 draws, user 0"};
  });

  add(report, "matched-filter SINR vs direct transcription", [&] {
    Rng rng = make_substream(seed, 1, Substream::fading);
    const CMatrix h = effective_channel(draw_channel(f.layout, m, rng), f.coupling);
    const double p = db_to_linear(10.0) * n0;
    const std::vector<double> got = sinr_per_user(h, mf_precoder_full(h, p), n0);
    const double rho = p / (m * n0);
    double worst = 0.0;
    for (Eigen::Index k = 0; k < h.rows(); ++k) {
      double interference = 0.0;
      for (Eigen::Index j = 0; j < h.rows(); ++j) {
        if (j != k) interference += std::norm(h.row(k).dot(h.row(j)));
      }
      const double want = rho * std::norm(h.row(k).squaredNorm()) / (1.0 + rho * interference);
      worst = std::max(worst, rel_err(got[static_cast<std::size_t>(k)], want));
    }
    return ValidationCheck{{}, worst, 1e-12, false, "one draw, 10 dB"};
  });

  add(report, "max-min equal SINR, full power, beats MF", [&] {
    double worst_spread = 0.0;
    double worst_power = 0.0;
    int dominated = 0;
    for (std::uint64_t t = 0; t < 20; ++t) {
      Rng rng = make_substream(seed, 100 + t, Substream::fading);
      const CMatrix h = effective_channel(draw_channel(f.layout, m, rng), f.coupling);
      const double p = db_to_linear(10.0) * n0;
      const BeamformerSolution s = maxmin_beamforming(h, p, n0);
      const auto [lo, hi] = std::minmax_element(s.per_user_sinr.begin(), s.per_user_sinr.end());
      worst_spread = std::max(worst_spread, (*hi - *lo) / s.t_star);
      worst_power = std::max(worst_power, rel_err(s.precoder.power_used, p));
      const auto mf = sinr_per_user(h, mf_precoder_full(h, p, MfScaling::total_power), n0);
      if (s.t_star < *std::min_element(mf.begin(), mf.end())) ++dominated;
    }
    ValidationCheck c{{}, std::max(worst_spread, worst_power), 1e-6, false, {}};
    char buf[160];
    std::snprintf(buf, sizeof buf, "20 draws: spread %.2e, power err %.2e, MF wins %d", worst_spread,
                  worst_power, dominated);
    c.detail = buf;
    if (dominated > 0 || worst_power > 1e-9) c.achieved = std::numeric_limits<double>::infinity();
    return c;
  });

  add(report, "equivalent SINR law vs matched filter (KS)", [&] {
    const Fixture g = make_fixture(8, 4, seed);
    Scenario sc;
    sc.system = g.system;
    sc.system.tx_power_w = db_to_linear(10.0) * n0;
    sc.coupling = g.coupling;
    sc.placement = Placement::fixed;
    const UserLayout layout = trial_layout(sc, seed, 0);
    const long n = 20000;
    const std::vector<double> mf = sample_user_sinr(sc, 0, n, seed, threads);
    const std::vector<double> eq =
        sample_equivalent_sinr(g.spectrum.eigenvalues, layout.variances[0], interferer_variances(layout.variances, 0),
                               sc.system.rho(), n, seed + 1, threads);
    const KsResult ks = ks_two_sample(mf, eq, 0.01);
    char buf[96];
    std::snprintf(buf, sizeof buf, "M=8, K=4, 2e4 draws each, p = %.3f", ks.p_value);
    return ValidationCheck{{}, ks.statistic, ks.critical, false, buf};
  });

  add(report, "Monte Carlo independent of thread count", [&] {
    Scenario sc;
    sc.system = f.system;
    sc.system.tx_power_w = db_to_linear(10.0) * n0;
    sc.coupling = f.coupling;
    const double a = estimate_throughput_mc(sc, 200, seed, 1).average.mean;
    const double b = estimate_throughput_mc(sc, 200, seed, 3).average.mean;
    return ValidationCheck{{}, a == b ? 0.0 : 1.0, 0.0, false, "200 trials, 1 vs 3 threads, bitwise"};
  });

  return report;
}

std::string format_report(const ValidationReport& report) {
  std::ostringstream out;
  for (const ValidationCheck& c : report.checks) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.3e <= %.1e", c.achieved, c.tolerance);
    out << (c.passed ? "PASS " : "FAIL ") << c.name << "  " << buf;
    if (!c.detail.empty()) out << "  (" << c.detail << ")";
    out << "\n";
  }
  out << (report.all_passed() ? "all checks passed" : "some checks failed") << "\n";
  return out.str();
}

}  // namespace hmimo
