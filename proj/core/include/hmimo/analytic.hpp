// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The hmimo Authors

#ifndef HMIMO_ANALYTIC_HPP
#define HMIMO_ANALYTIC_HPP

#include <span>
#include <vector>

#include "hmimo/coupling.hpp"
#include "hmimo/geometry.hpp"
#include "hmimo/special_functions.hpp"
#include "hmimo/types.hpp"

namespace hmimo {

// The full-CSI SINR is analysed through its distributional equivalent
//
//   gamma_k ~ rho X1^2 / (1 + rho X3),   X3 = X2 Y,
//   X1 = sum_i lambda_i   |a_i|^2,   X2 = sum_i lambda_i^2 |a_i|^2,
//   Y  = sum_j sigma_j^2 |y_j|^2,
//
// with |a_i|^2 ~ Exp(mean sigma_k^2) and |y_j|^2 ~ Exp(1). X1 and X3 are
// replaced by moment-matched gamma laws coupled through a bivariate
// (Kibble-type) gamma density, and the log is moved outside the expectation.

/// How the gamma parameters are obtained.
enum class MomentMatching {
  exact,          ///< exact first/second moments of X1, X3 and their covariance
  literal,  ///< direct closed-form expressions for (nu, theta, mu, phi) and the correlation, kept for comparison
};

/// Exact moments of the quadratic forms behind the equivalent SINR.
struct QuadraticFormMoments {
  double mean_x1 = 0.0;
  double var_x1 = 0.0;
  double mean_x3 = 0.0;
  double var_x3 = 0.0;
  double cov_x1_x3 = 0.0;

  double correlation() const;
};

QuadraticFormMoments quadratic_form_moments(const RVector& eigenvalues, double sigma_k2,
                                            std::span<const double> interferer_variances);

/// X1 ~ Gamma(nu, theta), X3 ~ Gamma(mu, phi), joined by the bivariate gamma
/// law with mixing parameter eta. The law's correlation coefficient is
/// eta * sqrt(nu / mu); `correlation` keeps the moment-matched target.
struct GammaApproxParams {
  double nu = 1.0;
  double theta = 1.0;
  double mu = 1.0;
  double phi = 1.0;
  double eta = 0.0;
  double correlation = 0.0;

  void validate() const;
};

/// How the mixing parameter eta is set from the target correlation.
enum class EtaConvention {
  matched,      ///< eta = corr * sqrt(mu / nu): the law reproduces the covariance
  coefficient,  ///< eta = corr, the plain correlation coefficient
};

/// Correlation coefficient of the bivariate gamma law with these parameters.
double bivariate_gamma_correlation(const GammaApproxParams& p);

/// Moment-matched parameters for user k. Requires at least one interferer.
GammaApproxParams moment_match_gamma(const RVector& eigenvalues, double sigma_k2,
                                     std::span<const double> interferer_variances,
                                     MomentMatching matching = MomentMatching::exact,
                                     EtaConvention eta = EtaConvention::matched);

GammaApproxParams moment_match_gamma(const Spectrum& spectrum, double sigma_k2,
                                     std::span<const double> interferer_variances,
                                     MomentMatching matching = MomentMatching::exact,
                                     EtaConvention eta = EtaConvention::matched);

/// Joint density of (X1, X3). Series over the mixing index with one Kummer
/// function per term.
double bivariate_gamma_pdf(double x1, double x3, const GammaApproxParams& p,
                           const special::SeriesControl& ctrl = {});

/// Result of the double series for E[rho X1^2 / (1 + rho X3)].
struct SeriesSum {
  double value = 0.0;
  int outer_terms = 0;      ///< terms used in the mixing index
  int max_inner_terms = 0;  ///< longest Kummer-index run
  double residual = 0.0;    ///< estimated truncation error, absolute
};

/// Closed-form double series for E[rho X1^2 / (1 + rho X3)] under the
/// bivariate gamma law. Assembled in log-magnitude/sign form.
SeriesSum full_csi_sigma(const GammaApproxParams& p, double rho,
                       const special::SeriesControl& ctrl = {});

/// Rate of the exponential law X ~ Exp(beta) of |alpha_k Q 1^T|^2.
struct ExpApproxParams {
  double beta = 1.0;

  double mean() const { return 1.0 / beta; }
};

enum class BetaMode {
  row_sums,       ///< 1/beta = sigma_k^2 sum_i |sum_j q_ij|^2 (exact variance)
  literal,  ///< beta = sigma_k^2 |sum_ij q_ij|^-2
};

ExpApproxParams beta_parameter(const CMatrix& q, double sigma_k2, BetaMode mode = BetaMode::row_sums);

struct ThroughputResult {
  double value = 0.0;  ///< nats per channel use
  CsiMode mode = CsiMode::full;
  int series_terms = 0;
  double residual = 0.0;
};

/// ln(1 + Sigma) with the double-series Sigma. Needs K >= 2.
ThroughputResult throughput_full_csi(const RVector& eigenvalues, double sigma_k2,
                                     std::span<const double> interferer_variances, double rho,
                                     const special::SeriesControl& ctrl = {},
                                     MomentMatching matching = MomentMatching::exact,
                                     EtaConvention eta = EtaConvention::matched);

/// K = 1: ln(1 + rho E[X1^2]) = ln(1 + rho theta^2 nu (nu + 1)).
ThroughputResult throughput_single_user(const RVector& eigenvalues, double sigma_k2, double rho);

/// ln(1 + Sigma_bar), Sigma_bar = E[rho sigma_k^2 X / (1 + rho G2 X)].
ThroughputResult throughput_partial_csi(const ExpApproxParams& beta, double sigma_k2, double g2,
                                        double rho);

/// ln(1 + Sigma_bar), Sigma_bar = E[rho X / (1 + rho X)].
ThroughputResult throughput_no_csi(const ExpApproxParams& beta, double rho);

/// Options for per-user analytic evaluation.
struct AnalyticOptions {
  MomentMatching matching = MomentMatching::exact;
  EtaConvention eta = EtaConvention::matched;
  BetaMode beta_mode = BetaMode::row_sums;
  special::SeriesControl series{};
};

/// Analytic throughput of every user for one CSI mode (full, partial, none).
std::vector<double> analytic_user_throughputs(const Spectrum& spectrum, const CMatrix& q,
                                              std::span<const double> variances, double rho,
                                              CsiMode mode, const AnalyticOptions& options = {});

}  // namespace hmimo

#endif  // HMIMO_ANALYTIC_HPP
