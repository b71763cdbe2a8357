// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The hmimo Authors

#ifndef HMIMO_ORACLES_HPP
#define HMIMO_ORACLES_HPP

#include "hmimo/analytic.hpp"

// Numerical-integration references for the closed forms. Slow, used by the
// validate command and by tests.
namespace hmimo::oracle {

/// e^x Gamma(a, x) = int_0^inf (x + u)^(a-1) e^-u du.
double upper_incomplete_gamma_scaled(double a, double x);

/// E1(x) = int_1^inf e^(-x t) / t dt.
double exponential_integral_e1(double x);

/// E[rho X1^2 / (1 + rho X3)] by 2-D quadrature of the bivariate gamma density.
double full_csi_sigma(const GammaApproxParams& p, double rho);

/// Same expectation with X1, X3 independent gammas (eta ignored), 1-D quadrature.
double full_csi_sigma_independent(const GammaApproxParams& p, double rho);

/// E[rho sigma_k^2 X / (1 + rho G2 X)], X ~ Exp(beta).
double partial_csi_sigma(double beta, double sigma_k2, double g2, double rho);

/// E[rho X / (1 + rho X)], X ~ Exp(beta).
double no_csi_sigma(double beta, double rho);

}  // namespace hmimo::oracle

#endif  // HMIMO_ORACLES_HPP
