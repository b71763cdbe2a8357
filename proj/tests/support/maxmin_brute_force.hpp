// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The hmimo Authors

// Brute-force max-min SINR for two users and two antennas. Independent of
// the dual fixed point in the library; shared by unit and acceptance tests.

#ifndef HMIMO_TESTS_MAXMIN_BRUTE_FORCE_HPP
#define HMIMO_TESTS_MAXMIN_BRUTE_FORCE_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <numbers>

#include "hmimo/types.hpp"

namespace hmimo::testing {

// Best min SINR of a 2x2 downlink for unit beams u_k = (cos a_k, e^{i b_k} sin a_k).
// SINR_0 rises and SINR_1 falls with the power share of user 0, so the best
// split equalizes them; found by bisection.
inline double equalized_2x2(const CMatrix& h, double power, double n0, const std::array<double, 4>& x) {
  CVector u0(2), u1(2);
  u0 << std::cos(x[0]), std::polar(std::sin(x[0]), x[1]);
  u1 << std::cos(x[2]), std::polar(std::sin(x[2]), x[3]);
  const double g00 = std::norm((h.row(0) * u0)(0)), g01 = std::norm((h.row(0) * u1)(0));
  const double g11 = std::norm((h.row(1) * u1)(0)), g10 = std::norm((h.row(1) * u0)(0));
  double lo = 0.0, hi = 1.0;
  for (int i = 0; i < 60; ++i) {
    const double s = 0.5 * (lo + hi);
    const double s0 = s * power * g00 / (n0 + (1 - s) * power * g01);
    const double s1 = (1 - s) * power * g11 / (n0 + s * power * g10);
    (s0 < s1 ? lo : hi) = s;
  }
  const double s = 0.5 * (lo + hi);
  return std::min(s * power * g00 / (n0 + (1 - s) * power * g01),
                  (1 - s) * power * g11 / (n0 + s * power * g10));
}

// Grid over both beams, then a shrinking pattern search from the best point.
inline double brute_force_2x2(const CMatrix& h, double power, double n0) {
  const double pi = std::numbers::pi;
  const int n = 24;
  std::array<double, 4> best{};
  double best_val = 0.0;
  for (int i0 = 0; i0 <= n; ++i0) {
    for (int j0 = 0; j0 < n; ++j0) {
      for (int i1 = 0; i1 <= n; ++i1) {
        for (int j1 = 0; j1 < n; ++j1) {
          const std::array<double, 4> x{pi / 2 * i0 / n, 2 * pi * j0 / n, pi / 2 * i1 / n, 2 * pi * j1 / n};
          const double v = equalized_2x2(h, power, n0, x);
          if (v > best_val) {
            best_val = v;
            best = x;
          }
        }
      }
    }
  }
  std::array<double, 4> step{pi / 4 / n, pi / n, pi / 4 / n, pi / n};
  for (int round = 0; round < 200; ++round) {
    bool moved = false;
    for (int d = 0; d < 4; ++d) {
      for (double sign : {1.0, -1.0}) {
        auto x = best;
        x[d] += sign * step[d];
        const double v = equalized_2x2(h, power, n0, x);
        if (v > best_val) {
          best_val = v;
          best = x;
          moved = true;
        }
      }
    }
    if (!moved) {
      for (double& st : step) st *= 0.5;
    }
  }
  return best_val;
}

}  // namespace hmimo::testing

#endif  // HMIMO_TESTS_MAXMIN_BRUTE_FORCE_HPP
