// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The hmimo Authors

#ifndef HMIMO_STATISTICS_HPP
#define HMIMO_STATISTICS_HPP

#include <span>

namespace hmimo {

/// Neumaier-compensated running sum.
class CompensatedSum {
public:
  void add(double x);
  double value() const { return sum_ + compensation_; }

private:
  double sum_ = 0.0;
  double compensation_ = 0.0;
};

struct McEstimate {
  double mean = 0.0;
  double half_width_95 = 0.0;  ///< 1.96 sample_std / sqrt(n)
  long n_trials = 0;
};

/// Mean and normal-approximation 95% half-width; needs at least two samples.
McEstimate summarize(std::span<const double> samples);

struct KsResult {
  double statistic = 0.0;   ///< D = sup |F_a - F_b|
  double p_value = 1.0;     ///< asymptotic Kolmogorov tail
  double critical = 0.0;    ///< c(alpha) sqrt((n + m) / (n m))
  bool reject = false;      ///< D > critical
};

/// Two-sample Kolmogorov-Smirnov test; each sample needs at least 1000 points.
KsResult ks_two_sample(std::span<const double> a, std::span<const double> b, double alpha = 0.01);

struct Moments {
  double mean = 0.0;
  double variance = 0.0;  ///< unbiased
};

Moments empirical_moments(std::span<const double> samples);

/// Pearson correlation of paired samples.
double empirical_correlation(std::span<const double> a, std::span<const double> b);

/// Unbiased sample covariance of paired samples.
double empirical_covariance(std::span<const double> a, std::span<const double> b);

}  // namespace hmimo

#endif  // HMIMO_STATISTICS_HPP
