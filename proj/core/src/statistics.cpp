// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The hmimo Authors

#include "hmimo/statistics.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "hmimo/types.hpp"

namespace hmimo {

void CompensatedSum::add(double x) {
  const double t = sum_ + x;
  if (std::abs(sum_) >= std::abs(x)) {
    compensation_ += (sum_ - t) + x;
  } else {
    compensation_ += (x - t) + sum_;
  }
  sum_ = t;
}

Moments empirical_moments(std::span<const double> samples) {
  require(samples.size() >= 2, "empirical_moments: need at least two samples");
  CompensatedSum sum;
  for (const double x : samples) sum.add(x);
  const double n = static_cast<double>(samples.size());
  const double mean = sum.value() / n;
  CompensatedSum sq;
  for (const double x : samples) sq.add((x - mean) * (x - mean));
  return {mean, sq.value() / (n - 1.0)};
}

McEstimate summarize(std::span<const double> samples) {
  const Moments m = empirical_moments(samples);
  const double n = static_cast<double>(samples.size());
  return {m.mean, 1.96 * std::sqrt(m.variance / n), static_cast<long>(samples.size())};
}

double empirical_covariance(std::span<const double> a, std::span<const double> b) {
  require(a.size() == b.size(), "covariance: samples must be paired");
  const double ma = empirical_moments(a).mean;
  const double mb = empirical_moments(b).mean;
  CompensatedSum s;
  for (std::size_t i = 0; i < a.size(); ++i) s.add((a[i] - ma) * (b[i] - mb));
  return s.value() / (static_cast<double>(a.size()) - 1.0);
}

double empirical_correlation(std::span<const double> a, std::span<const double> b) {
  const double va = empirical_moments(a).variance;
  const double vb = empirical_moments(b).variance;
  require(va > 0.0 && vb > 0.0, "correlation: constant sample");
  return empirical_covariance(a, b) / std::sqrt(va * vb);
}

KsResult ks_two_sample(std::span<const double> a, std::span<const double> b, double alpha) {
  require(a.size() >= 1000 && b.size() >= 1000, "ks_two_sample: need at least 1000 points each");
  require(alpha > 0.0 && alpha < 1.0, "ks_two_sample: alpha must lie in (0, 1)");
  std::vector<double> x(a.begin(), a.end());
  std::vector<double> y(b.begin(), b.end());
  std::sort(x.begin(), x.end());
  std::sort(y.begin(), y.end());
  const double n = static_cast<double>(x.size());
  const double m = static_cast<double>(y.size());
  std::size_t i = 0;
  std::size_t j = 0;
  double d = 0.0;
  while (i < x.size() && j < y.size()) {
    const double v = std::min(x[i], y[j]);
    while (i < x.size() && x[i] == v) ++i;
    while (j < y.size() && y[j] == v) ++j;
    d = std::max(d, std::abs(i / n - j / m));
  }
  KsResult r;
  r.statistic = d;
  const double ne = n * m / (n + m);
  r.critical = std::sqrt(-0.5 * std::log(alpha / 2.0)) / std::sqrt(ne);
  r.reject = d > r.critical;
  const double lambda = (std::sqrt(ne) + 0.12 + 0.11 / std::sqrt(ne)) * d;
  double p = 0.0;
  if (lambda < 0.2) {
    p = 1.0;
  } else {
    for (int k = 1; k <= 100; ++k) {
      const double term = 2.0 * ((k % 2) ? 1.0 : -1.0) * std::exp(-2.0 * k * k * lambda * lambda);
      p += term;
      if (std::abs(term) < 1e-16) break;
    }
  }
  r.p_value = std::clamp(p, 0.0, 1.0);
  return r;
}

}  // namespace hmimo
