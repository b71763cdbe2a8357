// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The hmimo Authors

#include <benchmark/benchmark.h>

#include "hmimo/analytic.hpp"
#include "hmimo/channel.hpp"
#include "hmimo/coupling.hpp"
#include "hmimo/maxmin.hpp"
#include "hmimo/monte_carlo.hpp"
#include "hmimo/random.hpp"
#include "hmimo/special_functions.hpp"

namespace {

using namespace hmimo;

CouplingModel coupling(int m) {
  const double lambda = kSpeedOfLight / 1.6e9;
  const ArrayGeometry g = build_array_geometry(m, ArrayMode::fixed_spacing, lambda / 2.0, ArrayShape::rectangle);
  Rng rng = make_stream(1, 0);
  return make_coupling_model(coupling_matrix(g, lambda), excitation_matrix(m, rng));
}

void BM_IncompleteGammaLadder(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(special::log_upper_incomplete_gamma_scaled_ladder(-2.3, 0.8, 128));
  }
}
BENCHMARK(BM_IncompleteGammaLadder);

void BM_Kummer(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(special::kummer_1f1(-7.5, 1.5, 12.0));
}
BENCHMARK(BM_Kummer);

// Full-CSI double series for one cell-edge user; argument is M.
void BM_DoubleSeries(benchmark::State& state) {
  const int m = static_cast<int>(state.range(0));
  const Spectrum s = hermitian_evd(coupling(m).correlation);
  const std::vector<double> others(7, 1.0);
  const GammaApproxParams p = moment_match_gamma(s, 1.0, others);
  const double rho = 10.0 / m;
  for (auto _ : state) benchmark::DoNotOptimize(full_csi_sigma(p, rho).value);
}
BENCHMARK(BM_DoubleSeries)->Arg(16)->Arg(128);

// Max-min beamforming, K = 8; argument is M.
void BM_MaxMin(benchmark::State& state) {
  const int m = static_cast<int>(state.range(0));
  const CouplingModel c = coupling(m);
  Rng rng = make_stream(2, 0);
  const CMatrix h = effective_channel(draw_channel(equal_gain_layout(8), m, rng), c);
  for (auto _ : state) benchmark::DoNotOptimize(maxmin_beamforming(h, 10.0, 1.0).t_star);
}
BENCHMARK(BM_MaxMin)->Arg(16)->Arg(128);

// 100 Monte Carlo trials of one grid point, single thread; argument is M.
void BM_MonteCarloFullCsi(benchmark::State& state) {
  Scenario sc;
  sc.system.num_elements = static_cast<int>(state.range(0));
  sc.system.pathloss_reference_m = 500.0;
  sc.system.tx_power_w = 10.0 * sc.system.noise_power_w;
  sc.coupling = coupling(sc.system.num_elements);
  for (auto _ : state) benchmark::DoNotOptimize(estimate_throughput_mc(sc, 100, 1, 1).average.mean);
  state.SetItemsProcessed(state.iterations() * 100);
}
BENCHMARK(BM_MonteCarloFullCsi)->Arg(16)->Arg(128)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
