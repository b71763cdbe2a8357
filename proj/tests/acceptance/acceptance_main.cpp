// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The hmimo Authors

// Acceptance suite: one PASS/FAIL line per criterion.
//
//   hmimo_acceptance [--only N] [--known-failures 3,4] [--output-dir DIR] [--cli PATH]
//
// A criterion listed in --known-failures still prints FAIL, but does not set
// the exit status. Anything else that fails does. A known failure that
// passes prints a note so the list can be trimmed.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "hmimo/analytic.hpp"
#include "hmimo/channel.hpp"
#include "hmimo/coupling.hpp"
#include "hmimo/experiment.hpp"
#include "hmimo/experiment_config.hpp"
#include "hmimo/maxmin.hpp"
#include "hmimo/monte_carlo.hpp"
#include "hmimo/oracles.hpp"
#include "hmimo/precoding.hpp"
#include "hmimo/random.hpp"
#include "hmimo/statistics.hpp"
#include "maxmin_brute_force.hpp"

namespace fs = std::filesystem;
using namespace hmimo;

namespace {

constexpr std::uint64_t kSeed = 20260101;

struct Outcome {
  bool passed = false;
  std::string summary;              // one line
  std::vector<std::string> detail;  // printed indented under the verdict
};

struct Context {
  fs::path output_dir;
  std::string cli;
  int threads = 0;
};

// printf with every number passed as double, so "%.0f" takes ints too.
template <class... Args>
std::string fmt(const char* f, Args... args) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, static_cast<double>(args)...);
  return buf;
}

double rel_err(double got, double want) { return std::abs(got - want) / std::abs(want); }

double wavelength() { return kSpeedOfLight / 1.6e9; }

struct Setup {
  SystemConfig system;
  CouplingModel coupling;
  Spectrum spectrum;
};

// lambda/2 rectangular array, -104 dBm noise, d_ref = cell radius.
Setup make_setup(int m, int k) {
  Setup s;
  s.system.num_elements = m;
  s.system.num_users = k;
  s.system.pathloss_reference_m = 500.0;
  s.system.seed = kSeed;
  const ArrayGeometry g =
      build_array_geometry(m, ArrayMode::fixed_spacing, 0.5 * wavelength(), ArrayShape::rectangle);
  Rng phases = make_substream(kSeed, 0, Substream::excitation);
  s.coupling = make_coupling_model(coupling_matrix(g, wavelength()), excitation_matrix(m, phases));
  s.spectrum = hermitian_evd(s.coupling.correlation);
  return s;
}

UserLayout placed_users(const Setup& s, std::uint64_t trial) {
  Rng rng = make_substream(kSeed, trial, Substream::users);
  return place_users(s.system, rng);
}

// Rows of a run keyed by (mode, M, K, snr, x).
struct RowIndex {
  std::map<std::tuple<CsiMode, int, int, double, double>, ResultRow> rows;
  explicit RowIndex(const std::vector<ResultRow>& all) {
    for (const ResultRow& r : all) rows[{r.mode, r.num_elements, r.num_users, r.snr_db, r.x_value}] = r;
  }
  const ResultRow& at(CsiMode mode, int m, int k, double snr, double x) const {
    return rows.at({mode, m, k, snr, x});
  }
};

std::vector<ResultRow> run_and_save(const ExperimentConfig& config, const Context& ctx) {
  const auto rows = run_experiment(config, ctx.threads);
  ExperimentConfig out = config;
  out.output_dir = ctx.output_dir;
  write_outputs(out, rows);
  return rows;
}

// ---------------------------------------------------------------------------

Outcome closed_forms_vs_quadrature(const Context&) {
  double worst = 0.0;
  int points = 0;
  for (int m : {4, 16, 64}) {
    for (int k : {2, 8}) {
      const Setup s = make_setup(m, k);
      const UserLayout layout = placed_users(s, 0);
      for (double snr : {-10.0, 0.0, 10.0, 20.0, 30.0}) {
        ++points;
        const double rho = db_to_linear(snr) / m;
        for (int u = 0; u < k; ++u) {
          const double s2 = layout.variances[static_cast<std::size_t>(u)];
          const ExpApproxParams beta = beta_parameter(s.coupling.correlation, s2);
          const double g2 = variance_sum(interferer_variances(layout.variances, u), 2);
          worst = std::max(worst, rel_err(std::expm1(throughput_partial_csi(beta, s2, g2, rho).value),
                                          oracle::partial_csi_sigma(beta.beta, s2, g2, rho)));
          worst = std::max(worst, rel_err(std::expm1(throughput_no_csi(beta, rho).value),
                                          oracle::no_csi_sigma(beta.beta, rho)));
        }
      }
    }
  }
  return {worst <= 1e-8,
          fmt("worst relative error %.2e (limit 1e-8) over %.0f grid points, partial and no CSI, every user",
              worst, points),
          {}};
}

Outcome series_vs_quadrature(const Context&) {
  const Setup s = make_setup(16, 8);
  const UserLayout layout = placed_users(s, 0);
  Outcome out;
  double worst = 0.0;
  for (double snr : {0.0, 10.0, 20.0}) {
    const double rho = db_to_linear(snr) / 16;
    for (int u = 0; u < 8; ++u) {
      const GammaApproxParams p = moment_match_gamma(s.spectrum, layout.variances[static_cast<std::size_t>(u)],
                                                     interferer_variances(layout.variances, u));
      worst = std::max(worst, rel_err(full_csi_sigma(p, rho).value, oracle::full_csi_sigma(p, rho)));
    }
    out.detail.push_back(fmt("%+.0f dB: worst so far %.2e", snr, worst));
  }
  out.passed = worst <= 1e-4;
  out.summary = fmt("worst relative error %.2e (limit 1e-4), M=16, K=8, 0/10/20 dB, every user", worst);
  return out;
}

ExperimentConfig sweep_config() {
  ExperimentConfig c = default_config("snr-sweep");
  c.name = "acceptance-snr-sweep";
  c.seed = kSeed;
  c.sweep_values = parse_number_list("-10:5:30");
  return c;
}

Outcome analytic_vs_monte_carlo(const Context& ctx) {
  const ExperimentConfig c = sweep_config();
  const RowIndex idx(run_and_save(c, ctx));
  Outcome out;
  double worst_gap = 0.0;
  int jensen_bad = 0, order_bad_mc = 0, order_bad_an = 0, points = 0;
  for (int m : c.num_elements) {
    for (double snr : c.sweep_values) {
      ++points;
      const ResultRow& f = idx.at(CsiMode::full, m, 8, snr, snr);
      const ResultRow& p = idx.at(CsiMode::partial, m, 8, snr, snr);
      const ResultRow& n = idx.at(CsiMode::none, m, 8, snr, snr);
      std::string line = fmt("M=%-3.0f %+5.1f dB ", m, snr);
      for (const ResultRow* r : {&f, &p, &n}) {
        const double gap = (*r->analytic_nats - *r->mc_mean_nats) / *r->mc_mean_nats;
        worst_gap = std::max(worst_gap, std::abs(gap));
        if (*r->analytic_nats < *r->mc_mean_nats - *r->mc_ci95) ++jensen_bad;
        line += std::string(to_string(r->mode)) + fmt(" an %.4f mc %.4f (%+.1f%%)  ", *r->analytic_nats,
                                                      *r->mc_mean_nats, 100.0 * gap);
      }
      if (!(*f.mc_mean_nats >= *p.mc_mean_nats && *p.mc_mean_nats >= *n.mc_mean_nats)) ++order_bad_mc;
      if (!(*f.analytic_nats >= *p.analytic_nats && *p.analytic_nats >= *n.analytic_nats)) ++order_bad_an;
      out.detail.push_back(line);
    }
  }
  out.passed = worst_gap <= 0.15 && jensen_bad == 0 && order_bad_mc == 0 && order_bad_an == 0;
  out.summary = fmt("worst |analytic/MC - 1| = %.1f%% (limit 15%%), analytic below MC - CI at %.0f of ", 100.0 * worst_gap,
                    jensen_bad) +
                fmt("%.0f curve points; full >= partial >= none violated at %.0f (MC) / ", 3.0 * points, order_bad_mc) +
                fmt("%.0f (analytic) of %.0f points", order_bad_an, points);
  return out;
}

Outcome ratio_point(const Context& ctx) {
  ExperimentConfig c = sweep_config();
  c.name = "acceptance-ratio-point";
  c.num_elements = {128};
  c.sweep_values = {10.0};
  const RowIndex idx(run_and_save(c, ctx));
  const double f = *idx.at(CsiMode::full, 128, 8, 10.0, 10.0).mc_mean_nats;
  const double p = *idx.at(CsiMode::partial, 128, 8, 10.0, 10.0).mc_mean_nats;
  const double n = *idx.at(CsiMode::none, 128, 8, 10.0, 10.0).mc_mean_nats;
  const double fa = *idx.at(CsiMode::full, 128, 8, 10.0, 10.0).analytic_nats;
  const double pa = *idx.at(CsiMode::partial, 128, 8, 10.0, 10.0).analytic_nats;
  const double na = *idx.at(CsiMode::none, 128, 8, 10.0, 10.0).analytic_nats;
  const double rf = f / n, rp = p / n;
  // The ratio does not depend on the log base; the absolute values do.
  const bool ratio_ok = std::abs(rf / 3.0 - 1.0) <= 0.25 && std::abs(rp / 1.5 - 1.0) <= 0.25;
  auto near = [](double v, double target) { return std::abs(v / target - 1.0) <= 0.25; };
  auto matches = [&](double scale) {
    return std::string("full ") + (near(f / scale, 3.0) ? "yes" : "no") + ", partial " +
           (near(p / scale, 1.5) ? "yes" : "no") + ", none " + (near(n / scale, 1.0) ? "yes" : "no");
  };
  const double ln2 = std::log(2.0);
  const bool nats_ok = near(f, 3.0) && near(p, 1.5) && near(n, 1.0);
  const bool bits_ok = near(f / ln2, 3.0) && near(p / ln2, 1.5) && near(n / ln2, 1.0);
  Outcome out;
  out.passed = ratio_ok;
  out.detail = {fmt("MC nats:       full %.4f  partial %.4f  none %.4f", f, p, n),
                fmt("MC bits:       full %.4f  partial %.4f  none %.4f", f / ln2, p / ln2, n / ln2),
                fmt("analytic nats: full %.4f  partial %.4f  none %.4f", fa, pa, na),
                fmt("analytic ratio full:partial:none = %.2f : %.2f : 1", fa / na, pa / na),
                "absolute match to 3 / 1.5 / 1 within 25%, nats: " + matches(1.0),
                "absolute match to 3 / 1.5 / 1 within 25%, bits: " + matches(ln2)};
  out.summary = fmt("MC ratio full:partial:none = %.2f : %.2f : 1 (target 3 : 1.5 : 1, +-25%%); ", rf, rp) +
                "absolute values match in " +
                (nats_ok && bits_ok ? "both units"
                 : nats_ok          ? "nats"
                 : bits_ok          ? "bits"
                                    : "neither unit");
  return out;
}

Outcome equivalent_sinr_ks(const Context& ctx) {
  Outcome out;
  out.passed = true;
  std::string summary;
  for (auto [m, k] : {std::pair{8, 4}, std::pair{16, 8}}) {
    const Setup s = make_setup(m, k);
    Scenario sc;
    sc.system = s.system;
    sc.system.tx_power_w = db_to_linear(10.0) * sc.system.noise_power_w;
    sc.coupling = s.coupling;
    sc.placement = Placement::fixed;
    const UserLayout layout = trial_layout(sc, kSeed, 0);
    const long n = 100000;
    const auto mf = sample_user_sinr(sc, 0, n, kSeed, ctx.threads);
    const auto eq = sample_equivalent_sinr(s.spectrum.eigenvalues, layout.variances[0],
                                           interferer_variances(layout.variances, 0), sc.system.rho(), n,
                                           kSeed + 1, ctx.threads);
    const KsResult ks = ks_two_sample(mf, eq, 0.01);
    out.passed = out.passed && !ks.reject;
    summary += fmt("(M=%.0f, K=%.0f) ", m, k) + fmt("D = %.5f vs critical %.5f, p = %.3f; ", ks.statistic, ks.critical, ks.p_value);
  }
  out.summary = summary + "1e5 draws each, alpha = 0.01";
  return out;
}

Outcome maxmin_solver(const Context&) {
  const Setup s = make_setup(16, 8);
  const double n0 = s.system.noise_power_w;
  const double p = db_to_linear(10.0) * n0;
  double worst_spread = 0.0, worst_power = 0.0;
  int dominated = 0;
  for (std::uint64_t t = 0; t < 100; ++t) {
    const UserLayout layout = placed_users(s, t);
    Rng rng = make_substream(kSeed, t, Substream::fading);
    const CMatrix h = effective_channel(draw_channel(layout, 16, rng), s.coupling);
    const BeamformerSolution sol = maxmin_beamforming(h, p, n0);
    const auto [lo, hi] = std::minmax_element(sol.per_user_sinr.begin(), sol.per_user_sinr.end());
    worst_spread = std::max(worst_spread, (*hi - *lo) / sol.t_star);
    worst_power = std::max(worst_power, rel_err(sol.precoder.power_used, p));
    const auto mf = sinr_per_user(h, mf_precoder_full(h, p, MfScaling::total_power), n0);
    if (sol.t_star < *std::min_element(mf.begin(), mf.end())) ++dominated;
  }
  double worst_brute = 0.0;
  for (std::uint64_t t = 0; t < 5; ++t) {
    Rng rng = make_substream(kSeed, 1000 + t, Substream::fading);
    const CMatrix h = draw_channel(equal_gain_layout(2), 2, rng);
    const double t_star = maxmin_beamforming(h, 1.0, 0.1).t_star;
    worst_brute = std::max(worst_brute, rel_err(testing::brute_force_2x2(h, 1.0, 0.1), t_star));
  }
  Outcome out;
  out.passed = worst_spread <= 1e-6 && dominated == 0 && worst_brute <= 0.01 && worst_power <= 1e-9;
  out.summary = fmt("100 instances: SINR spread %.1e (limit 1e-6), power error %.1e (limit 1e-9), ", worst_spread,
                    worst_power) +
                fmt("MF beats max-min on %.0f; M=2, K=2 brute force gap %.2e (limit 1e-2, 5 channels)", dominated,
                    worst_brute);
  return out;
}

Outcome coupling_saturation(const Context& ctx) {
  ExperimentConfig c = default_config("aperture-coupling");
  c.name = "acceptance-aperture-coupling";
  c.seed = kSeed;
  const RowIndex idx(run_and_save(c, ctx));
  std::vector<double> t;
  for (double m : c.sweep_values) t.push_back(*idx.at(CsiMode::full, static_cast<int>(m), 8, 10.0, m).mc_mean_nats);
  std::vector<double> gain;
  for (std::size_t i = 1; i < t.size(); ++i) gain.push_back((t[i] - t[i - 1]) / (c.sweep_values[i] - c.sweep_values[i - 1]));
  Outcome out;
  out.passed = gain[2] < gain[1] && gain[1] < gain[0];
  out.summary = fmt("per-element gain 4->9 %.4f, 9->16 %.4f, ", gain[0], gain[1]) +
                fmt("16->25 %.4f nats (must strictly decrease), full-CSI MF, 1 m aperture", gain[2]);
  for (std::size_t i = 0; i < t.size(); ++i) {
    const double spacing = 1.0 / (std::sqrt(c.sweep_values[i]) - 1.0);
    out.detail.push_back(fmt("M=%-3.0f spacing %.3f m = %.2f lambda", c.sweep_values[i], spacing, spacing / wavelength()) +
                         fmt("  throughput %.4f nats", t[i]));
  }
  return out;
}

// Linear interpolation of the first sign change of d, or NaN.
double first_crossing(const std::vector<double>& x, const std::vector<double>& d) {
  for (std::size_t i = 1; i < d.size(); ++i) {
    if ((d[i - 1] > 0.0) != (d[i] > 0.0)) return x[i - 1] + (x[i] - x[i - 1]) * d[i - 1] / (d[i - 1] - d[i]);
  }
  return std::nan("");
}

int sign_changes(const std::vector<double>& d) {
  int n = 0;
  for (std::size_t i = 1; i < d.size(); ++i) n += (d[i - 1] > 0.0) != (d[i] > 0.0);
  return n;
}

Outcome csi_crossover(const Context& ctx) {
  ExperimentConfig c = default_config("csi-error");
  c.name = "acceptance-csi-error";
  c.seed = kSeed;
  const RowIndex idx(run_and_save(c, ctx));
  Outcome out;
  std::map<int, double> crossing;
  bool m32_ok = false;
  for (int m : c.num_elements) {
    std::vector<double> x, d;
    std::string line = fmt("M=%.0f maxmin - MF:", m);
    for (double e : c.sweep_values) {
      const double mm = *idx.at(CsiMode::optimal, m, 8, 10.0, e).mc_mean_nats;
      const double mf = *idx.at(CsiMode::full, m, 8, 10.0, e).mc_mean_nats;
      if (m == 32 && e > 10.0) continue;  // the M=32 check covers -30..+10 dB
      x.push_back(e);
      d.push_back(mm - mf);
      line += fmt(" %+.3f", mm - mf);
    }
    crossing[m] = first_crossing(x, d);
    out.detail.push_back(line);
    if (m == 32) m32_ok = d.front() > 0.0 && d.back() < 0.0 && sign_changes(d) == 1;
  }
  const bool shift_ok = std::isfinite(crossing[32]) && std::isfinite(crossing[128]) && crossing[128] > crossing[32];
  out.passed = m32_ok && shift_ok;
  out.summary = std::string("M=32 over -30..+10 dB: ") + (m32_ok ? "max-min wins low, MF wins high, one crossover" : "shape violated") +
                fmt("; crossover at %.2f dB (M=32) vs %.2f dB (M=128, swept to +20 dB)", crossing[32], crossing[128]);
  return out;
}

Outcome low_snr_parity(const Context& ctx) {
  ExperimentConfig c = default_config("snr-levels");
  c.name = "acceptance-snr-levels";
  c.seed = kSeed;
  c.snr_db = {-10.0, 2.0};
  c.sweep_values = {16, 32, 64};
  const RowIndex idx(run_and_save(c, ctx));
  double worst_rel = 0.0, worst_gap = 1e300;
  Outcome out;
  for (double m : c.sweep_values) {
    const int mi = static_cast<int>(m);
    const double mm_lo = *idx.at(CsiMode::optimal, mi, 8, -10.0, m).mc_mean_nats;
    const double mf_lo = *idx.at(CsiMode::full, mi, 8, -10.0, m).mc_mean_nats;
    const double mm_hi = *idx.at(CsiMode::optimal, mi, 8, 2.0, m).mc_mean_nats;
    const double mf_hi = *idx.at(CsiMode::full, mi, 8, 2.0, m).mc_mean_nats;
    worst_rel = std::max(worst_rel, std::abs(mm_lo - mf_lo) / mf_lo);
    worst_gap = std::min(worst_gap, mm_hi - mf_hi);
    out.detail.push_back(fmt("M=%-3.0f -10 dB: max-min %.4f MF %.4f", m, mm_lo, mf_lo) +
                         fmt("   +2 dB: max-min %.4f MF %.4f", mm_hi, mf_hi));
  }
  out.passed = worst_rel <= 0.10 && worst_gap >= 0.0;
  out.summary = fmt("-10 dB received: worst |max-min - MF| / MF = %.1f%% (limit 10%%); ", 100.0 * worst_rel) +
                fmt("+2 dB: smallest max-min - MF = %+.4f nats (must be >= 0)", worst_gap);
  return out;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Outcome cli_determinism(const Context& ctx) {
  Outcome out;
  if (ctx.cli.empty()) return {false, "no CLI path given (--cli)", {}};
  const fs::path dir = ctx.output_dir / "determinism";
  fs::create_directories(dir);
  ExperimentConfig c = default_config("mf-vs-optimal");
  c.name = "determinism";
  c.seed = kSeed;
  c.trials = 200;
  c.num_users = {4};
  c.sweep_values = {16, 32};
  c.csi_error_db = {-10.0};
  std::vector<std::string> csvs;
  for (int threads : {1, 3}) {
    c.output_dir = dir / ("threads-" + std::to_string(threads));
    const fs::path ini = dir / ("threads-" + std::to_string(threads) + ".ini");
    std::ofstream(ini) << to_ini(c);
    const std::string cmd = "HMIMO_THREADS=" + std::to_string(threads) + " \"" + ctx.cli + "\" run --quiet \"" +
                            ini.string() + "\" > /dev/null";
    if (std::system(cmd.c_str()) != 0) return {false, "`" + cmd + "` failed", {}};
    csvs.push_back(slurp(c.output_dir / "determinism.csv"));
  }
  out.passed = !csvs[0].empty() && csvs[0] == csvs[1];
  out.summary = std::string("`hmimo run` with HMIMO_THREADS=1 and 3: CSVs ") +
                (out.passed ? "byte-identical" : "differ") + fmt(" (%.0f bytes)", static_cast<double>(csvs[0].size()));
  return out;
}

struct Criterion {
  int id;
  std::string name;
  std::function<Outcome(const Context&)> run;
};

const std::vector<Criterion>& criteria() {
  static const std::vector<Criterion> all{
      {1, "partial/no-CSI closed forms vs 1-D quadrature", closed_forms_vs_quadrature},
      {2, "full-CSI double series vs 2-D quadrature", series_vs_quadrature},
      {3, "analytic vs Monte Carlo, M in {16, 128}, -10..30 dB", analytic_vs_monte_carlo},
      {4, "throughput ratio at 10 dB, M=128, K=8", ratio_point},
      {5, "equivalent SINR law vs matched-filter SINR (KS)", equivalent_sinr_ks},
      {6, "max-min solver", maxmin_solver},
      {7, "coupling saturation in a fixed aperture", coupling_saturation},
      {8, "CSI-error crossover", csi_crossover},
      {9, "low-SNR parity of max-min and MF", low_snr_parity},
      {10, "determinism across thread counts", cli_determinism},
  };
  return all;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"hmimo acceptance suite"};
  std::vector<int> only;
  std::vector<int> known;
  Context ctx;
  std::string output_dir = "acceptance-results";
  app.add_option("--only", only, "Run only these criteria");
  app.add_option("--known-failures", known, "Criteria whose failure is documented")->delimiter(',');
  app.add_option("--output-dir", output_dir, "Where the criterion CSVs go");
  app.add_option("--cli", ctx.cli, "Path to the hmimo executable (criterion 10)");
  app.add_option("--threads", ctx.threads, "Worker threads");
  CLI11_PARSE(app, argc, argv);
  ctx.output_dir = output_dir;
  fs::create_directories(ctx.output_dir);
  const std::set<int> known_set(known.begin(), known.end());

  int passed = 0, ran = 0, unexpected = 0;
  for (const Criterion& c : criteria()) {
    if (!only.empty() && std::find(only.begin(), only.end(), c.id) == only.end()) continue;
    ++ran;
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run(ctx);
    } catch (const std::exception& e) {
      o = {false, std::string("threw: ") + e.what(), {}};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool is_known = known_set.count(c.id) > 0;
    std::cout << (o.passed ? "PASS" : is_known ? "FAIL (known)" : "FAIL") << "  criterion " << c.id << ": " << c.name
              << " -- " << o.summary << fmt(" [%.1f s]", secs) << "\n";
    for (const std::string& d : o.detail) std::cout << "      " << d << "\n";
    if (o.passed) {
      ++passed;
      if (is_known) std::cout << "      note: listed as a known failure but passed\n";
    } else if (!is_known) {
      ++unexpected;
    }
    std::cout.flush();
  }
  std::cout << passed << " of " << ran << " criteria passed";
  if (unexpected > 0) std::cout << ", " << unexpected << " unexpected failure(s)";
  std::cout << "\n";
  return unexpected == 0 ? 0 : 1;
}
