// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The hmimo Authors

#include "hmimo/analytic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace hmimo {
namespace {

using special::LogSumAccumulator;
using special::SignedLog;

// Ladder of ln(e^x Gamma(a - n, x)), n = 0, 1, ..., grown by doubling.
class LazyGammaLadder {
public:
  LazyGammaLadder(double a, double x) : a_(a), x_(x) {}

  double operator[](int n) {
    if (n >= static_cast<int>(values_.size())) {
      int count = std::max<int>(64, static_cast<int>(values_.size()) * 2);
      while (count <= n) count *= 2;
      values_ = special::log_upper_incomplete_gamma_scaled_ladder(a_, x_, count);
    }
    return values_[static_cast<std::size_t>(n)];
  }

private:
  double a_;
  double x_;
  std::vector<double> values_;
};

// Tail estimate for a run whose last two magnitudes are known, assuming
// geometric decay. Returns +inf if the run is not yet decreasing.
double geometric_tail_log(double prev_log, double cur_log) {
  if (!(cur_log < prev_log)) return std::numeric_limits<double>::infinity();
  const double r = std::exp(cur_log - prev_log);
  return cur_log + std::log(r) - std::log1p(-r);
}

double checked_rho(double rho) {
  require(std::isfinite(rho) && rho > 0.0, "rho must be positive and finite");
  return rho;
}

}  // namespace

double QuadraticFormMoments::correlation() const {
  return cov_x1_x3 / std::sqrt(var_x1 * var_x3);
}

QuadraticFormMoments quadratic_form_moments(const RVector& eigenvalues, double sigma_k2,
                                            std::span<const double> interferer_variances) {
  require(sigma_k2 > 0.0, "sigma_k^2 must be positive");
  require(!interferer_variances.empty(), "moment matching needs at least one interferer");
  const double l1 = spectral_sum(eigenvalues, 1);
  const double l2 = spectral_sum(eigenvalues, 2);
  const double l3 = spectral_sum(eigenvalues, 3);
  const double l4 = spectral_sum(eigenvalues, 4);
  const double g2 = variance_sum(interferer_variances, 2);
  const double g4 = variance_sum(interferer_variances, 4);
  const double s2 = sigma_k2 * sigma_k2;
  QuadraticFormMoments m;
  m.mean_x1 = sigma_k2 * l1;
  m.var_x1 = s2 * l2;
  m.mean_x3 = sigma_k2 * l2 * g2;
  const double second_x3 = s2 * (l4 + l2 * l2) * (g4 + g2 * g2);
  m.var_x3 = second_x3 - m.mean_x3 * m.mean_x3;
  m.cov_x1_x3 = s2 * l3 * g2;
  return m;
}

void GammaApproxParams::validate() const {
  require(std::isfinite(nu) && nu > 0.0, "gamma shape nu must be positive");
  require(std::isfinite(theta) && theta > 0.0, "gamma scale theta must be positive");
  require(std::isfinite(mu) && mu > 0.0, "gamma shape mu must be positive");
  require(std::isfinite(phi) && phi > 0.0, "gamma scale phi must be positive");
  require(std::isfinite(eta) && eta >= 0.0 && eta < 1.0, "eta must lie in [0, 1)");
}

double bivariate_gamma_correlation(const GammaApproxParams& p) {
  return p.eta * std::sqrt(p.nu / p.mu);
}

GammaApproxParams moment_match_gamma(const RVector& eigenvalues, double sigma_k2,
                                     std::span<const double> interferer_variances,
                                     MomentMatching matching, EtaConvention eta) {
  GammaApproxParams p;
  if (matching == MomentMatching::exact) {
    const QuadraticFormMoments m = quadratic_form_moments(eigenvalues, sigma_k2, interferer_variances);
    p.nu = m.mean_x1 * m.mean_x1 / m.var_x1;
    p.theta = m.var_x1 / m.mean_x1;
    p.mu = m.mean_x3 * m.mean_x3 / m.var_x3;
    p.phi = m.var_x3 / m.mean_x3;
    p.correlation = m.correlation();
  } else {
    require(sigma_k2 > 0.0, "sigma_k^2 must be positive");
    require(!interferer_variances.empty(), "moment matching needs at least one interferer");
    const double k = static_cast<double>(interferer_variances.size() + 1);
    const double l1 = spectral_sum(eigenvalues, 1);
    const double l2 = spectral_sum(eigenvalues, 2);
    const double l4 = spectral_sum(eigenvalues, 4);
    const double g2 = variance_sum(interferer_variances, 2);
    const double g4 = variance_sum(interferer_variances, 4);
    const double s4 = sigma_k2 * sigma_k2;
    const double denom = s4 * (k - 1.0) * l2 * l2 + k * l4;
    p.nu = l1 * l1 / l2;
    p.theta = sigma_k2 * l2 / l1;
    p.mu = (k - 1.0) * l2 * l2 / denom;
    p.phi = denom / ((k - 1.0) * l2);
    p.correlation = sigma_k2 * std::sqrt(l2) * g2 / std::sqrt(l4 * g2 + 2.0 * sigma_k2 * l4 * g4);
  }
  require(p.correlation >= 0.0, "negative correlation between X1 and X3");
  // The direct correlation expression is not scale invariant and leaves [0, 1] for large sigma_k^2.
  if (!(p.correlation <= 1.0)) {
    throw NumericalError("bivariate gamma: target correlation " + std::to_string(p.correlation) +
                         " exceeds 1");
  }
  p.eta = eta == EtaConvention::matched ? p.correlation * std::sqrt(p.mu / p.nu) : p.correlation;
  if (!(p.eta < 1.0)) {
    throw NumericalError("bivariate gamma: mixing parameter eta=" + std::to_string(p.eta) +
                         " is not below 1");
  }
  p.validate();
  return p;
}

GammaApproxParams moment_match_gamma(const Spectrum& spectrum, double sigma_k2,
                                     std::span<const double> interferer_variances,
                                     MomentMatching matching, EtaConvention eta) {
  return moment_match_gamma(spectrum.eigenvalues, sigma_k2, interferer_variances, matching, eta);
}

double bivariate_gamma_pdf(double x1, double x3, const GammaApproxParams& p,
                           const special::SeriesControl& ctrl) {
  p.validate();
  ctrl.validate();
  if (!(x1 > 0.0) || !(x3 > 0.0)) return 0.0;
  const double one_minus = 1.0 - p.eta;
  const double t = p.theta * one_minus;
  const double s = p.phi * one_minus;
  const double log_eta = p.eta > 0.0 ? std::log(p.eta) : -std::numeric_limits<double>::infinity();
  const double base = p.nu * std::log(one_minus) + (p.mu - p.nu) * std::log(one_minus) -
                      x1 / t - x3 / s;
  LogSumAccumulator acc;
  double prev_log = std::numeric_limits<double>::infinity();
  for (int i = 0; i < ctrl.max_terms; ++i) {
    const double ni = p.nu + i;
    const double mi = p.mu + i;
    SignedLog term = special::log_pochhammer(p.nu, i);
    term.log_abs += base - std::lgamma(i + 1.0) + (ni - 1.0) * std::log(x1) - ni * std::log(t) -
                    std::lgamma(ni) + (mi - 1.0) * std::log(x3) - mi * std::log(s) - std::lgamma(mi);
    if (i > 0) term.log_abs += i * log_eta;
    term = term * special::log_kummer_1f1(p.mu - p.nu, mi, p.eta * x3 / s, ctrl);
    acc.add(term);
    if (p.eta == 0.0) break;
    const SignedLog sum = acc.result();
    if (sum.sign != 0 && i > 0 &&
        geometric_tail_log(prev_log, term.log_abs) <= std::log(ctrl.rel_tol) + sum.log_abs) {
      return sum.value();
    }
    prev_log = term.log_abs;
    if (i + 1 == ctrl.max_terms) {
      throw NumericalError("bivariate gamma pdf: series did not converge within max_terms");
    }
  }
  return acc.result().value();
}

SeriesSum full_csi_sigma(const GammaApproxParams& p, double rho, const special::SeriesControl& ctrl) {
  p.validate();
  ctrl.validate();
  checked_rho(rho);
  const double one_minus = 1.0 - p.eta;
  const double x = 1.0 / (rho * p.phi * one_minus);
  const double log_x = std::log(x);
  const double log_pre = 2.0 * std::log(p.theta) + 2.0 * std::log(one_minus) +
                         (1.0 - p.mu) * std::log(rho) - p.mu * std::log(p.phi);
  LazyGammaLadder ladder(1.0 - p.mu, x);
  const double log_tol = std::log(ctrl.rel_tol);

  SeriesSum out;
  if (p.eta == 0.0) {
    out.value = std::exp(log_pre + std::log(p.nu * (p.nu + 1.0)) + ladder[0]);
    out.outer_terms = 1;
    out.max_inner_terms = 1;
    return out;
  }
  const double log_eta = std::log(p.eta);
  // Inner coefficients (mu - nu)_j eta^j / j!, shared by every row.
  std::vector<SignedLog> inner;
  auto inner_coeff = [&](int j) -> const SignedLog& {
    while (static_cast<int>(inner.size()) <= j) {
      const int n = static_cast<int>(inner.size());
      SignedLog c = special::log_pochhammer(p.mu - p.nu, n);
      c.log_abs += n * log_eta - std::lgamma(n + 1.0);
      inner.push_back(c);
    }
    return inner[static_cast<std::size_t>(j)];
  };

  LogSumAccumulator total;
  double prev_row = std::numeric_limits<double>::infinity();
  double inner_residual_log = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < ctrl.max_terms; ++i) {
    SignedLog outer = special::log_pochhammer(p.nu, i);
    outer.log_abs += i * log_eta - std::lgamma(i + 1.0) +
                     std::log((p.nu + i) * (p.nu + i + 1.0));
    LogSumAccumulator row;
    double prev_term = std::numeric_limits<double>::infinity();
    int j = 0;
    bool converged = false;
    for (; j < ctrl.max_terms; ++j) {
      const SignedLog& c = inner_coeff(j);
      if (c.sign == 0) {  // (mu - nu)_j vanishes: the inner series terminates
        converged = true;
        break;
      }
      SignedLog term = outer * c;
      term.log_abs += (i + j) * log_x + ladder[i + j];
      row.add(term);
      const SignedLog partial = row.result();
      const double tail = geometric_tail_log(prev_term, term.log_abs);
      if (j > 0 && partial.sign != 0 && tail <= log_tol + partial.log_abs) {
        inner_residual_log = std::max(inner_residual_log, tail);
        converged = true;
        ++j;
        break;
      }
      prev_term = term.log_abs;
    }
    if (!converged) {
      throw NumericalError("closed-form series: inner sum did not converge within max_terms");
    }
    out.max_inner_terms = std::max(out.max_inner_terms, j);
    const SignedLog row_sum = row.result();
    total.add(row_sum);
    out.outer_terms = i + 1;
    const SignedLog sum = total.result();
    if (row_sum.sign == 0) continue;
    const double tail = geometric_tail_log(prev_row, row_sum.log_abs);
    if (i > 0 && sum.sign != 0 && tail <= log_tol + sum.log_abs) {
      if (sum.sign < 0) throw NumericalError("closed-form series: negative sum");
      out.value = std::exp(log_pre + sum.log_abs);
      const double res_log = std::max(tail, inner_residual_log + std::log(out.outer_terms));
      out.residual = std::exp(log_pre + res_log);
      return out;
    }
    prev_row = row_sum.log_abs;
  }
  throw NumericalError("closed-form series: outer sum did not converge within max_terms");
}

ExpApproxParams beta_parameter(const CMatrix& q, double sigma_k2, BetaMode mode) {
  require(q.rows() == q.cols() && q.rows() > 0, "beta: Q must be square and nonempty");
  require(sigma_k2 > 0.0, "beta: sigma_k^2 must be positive");
  ExpApproxParams out;
  if (mode == BetaMode::row_sums) {
    const double energy = q.rowwise().sum().squaredNorm();
    if (!(energy > 0.0)) throw NumericalError("beta: Q has vanishing row sums");
    out.beta = 1.0 / (sigma_k2 * energy);
  } else {
    const double total = std::norm(q.sum());
    if (!(total > 0.0)) throw NumericalError("beta: Q sums to zero");
    out.beta = sigma_k2 / total;
  }
  return out;
}

ThroughputResult throughput_full_csi(const RVector& eigenvalues, double sigma_k2,
                                     std::span<const double> interferer_variances, double rho,
                                     const special::SeriesControl& ctrl, MomentMatching matching,
                                     EtaConvention eta) {
  require(!interferer_variances.empty(), "full-CSI series needs K >= 2; use the single-user form");
  const GammaApproxParams p =
      moment_match_gamma(eigenvalues, sigma_k2, interferer_variances, matching, eta);
  const SeriesSum s = full_csi_sigma(p, rho, ctrl);
  return {std::log1p(s.value), CsiMode::full, s.outer_terms, s.residual};
}

ThroughputResult throughput_single_user(const RVector& eigenvalues, double sigma_k2, double rho) {
  checked_rho(rho);
  require(sigma_k2 > 0.0, "sigma_k^2 must be positive");
  // E[X1^2] = Var + mean^2 = sigma^4 (L2 + L1^2) = theta^2 nu (nu + 1).
  const double l1 = spectral_sum(eigenvalues, 1);
  const double l2 = spectral_sum(eigenvalues, 2);
  const double second = sigma_k2 * sigma_k2 * (l2 + l1 * l1);
  return {std::log1p(rho * second), CsiMode::full, 0, 0.0};
}

ThroughputResult throughput_partial_csi(const ExpApproxParams& beta, double sigma_k2, double g2,
                                        double rho) {
  checked_rho(rho);
  require(beta.beta > 0.0, "beta must be positive");
  require(sigma_k2 > 0.0, "sigma_k^2 must be positive");
  require(g2 > 0.0, "partial CSI needs interferers (G2 > 0); use the no-CSI form for K = 1");
  const double y = beta.beta / (rho * g2);
  const double sigma_bar = sigma_k2 / g2 * special::scaled_exponential_integral_e2(y);
  return {std::log1p(sigma_bar), CsiMode::partial, 0, 0.0};
}

ThroughputResult throughput_no_csi(const ExpApproxParams& beta, double rho) {
  checked_rho(rho);
  require(beta.beta > 0.0, "beta must be positive");
  const double sigma_bar = special::scaled_exponential_integral_e2(beta.beta / rho);
  return {std::log1p(sigma_bar), CsiMode::none, 0, 0.0};
}

std::vector<double> analytic_user_throughputs(const Spectrum& spectrum, const CMatrix& q,
                                              std::span<const double> variances, double rho,
                                              CsiMode mode, const AnalyticOptions& options) {
  require(!variances.empty(), "at least one user is required");
  require(mode != CsiMode::optimal, "no analytic expression for the optimal beamformer");
  const int num_users = static_cast<int>(variances.size());
  std::vector<double> out(variances.size());
  for (int k = 0; k < num_users; ++k) {
    const double s2 = variances[static_cast<std::size_t>(k)];
    const std::vector<double> others = interferer_variances(variances, k);
    switch (mode) {
      case CsiMode::full:
        out[k] = others.empty()
                     ? throughput_single_user(spectrum.eigenvalues, s2, rho).value
                     : throughput_full_csi(spectrum.eigenvalues, s2, others, rho, options.series,
                                           options.matching, options.eta)
                           .value;
        break;
      case CsiMode::partial:
        if (others.empty()) {
          out[k] = throughput_no_csi(beta_parameter(q, s2, options.beta_mode), rho).value;
        } else {
          out[k] = throughput_partial_csi(beta_parameter(q, s2, options.beta_mode), s2,
                                          variance_sum(others, 2), rho)
                       .value;
        }
        break;
      case CsiMode::none:
        out[k] = throughput_no_csi(beta_parameter(q, s2, options.beta_mode), rho).value;
        break;
      case CsiMode::optimal:
        break;
    }
  }
  return out;
}

}  // namespace hmimo
