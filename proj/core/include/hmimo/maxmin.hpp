// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The hmimo Authors

#ifndef HMIMO_MAXMIN_HPP
#define HMIMO_MAXMIN_HPP

#include <string>
#include <vector>

#include "hmimo/precoding.hpp"
#include "hmimo/types.hpp"

namespace hmimo {

struct MaxMinOptions {
  double tolerance = 1e-8;   ///< relative bracket width on t before the final root solve
  int max_bisections = 200;
  int max_inner_iterations = 10000;
  int max_doublings = 60;
};

struct BeamformerSolution {
  Precoder precoder;
  double t_star = 0.0;               ///< achieved minimum SINR, linear
  std::vector<double> per_user_sinr;
  int iterations = 0;                ///< bisection steps
  bool converged = false;
};

struct FeasibilityResult {
  bool feasible = false;
  Precoder precoder;                  ///< downlink beamformer meeting t when feasible
  std::vector<double> dual_powers;    ///< uplink powers q
  double total_power = 0.0;           ///< sum of q (equal to the downlink power)
  int iterations = 0;
  std::string diagnostic;
};

/// Decides whether every user can reach SINR t with total power P. The dual
/// uplink powers solve q_k = t / (h_k (N0 I + sum_{j != k} q_j h_j^H h_j)^-1 h_k^H);
/// iterates start at q = 0 and increase monotonically, so the target is
/// infeasible as soon as sum q exceeds P.
FeasibilityResult feasibility_check(const CMatrix& h_known, double t, double power_w,
                                    double noise_power_w, const MaxMinOptions& options = {});

/// Max-min SINR beamforming under a total power budget: bisection on t,
/// then a root solve so that the budget is met with equality.
BeamformerSolution maxmin_beamforming(const CMatrix& h_known, double power_w, double noise_power_w,
                                      const MaxMinOptions& options = {});

}  // namespace hmimo

#endif  // HMIMO_MAXMIN_HPP
