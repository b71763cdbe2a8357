// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The hmimo Authors

#ifndef HMIMO_SPECIAL_FUNCTIONS_HPP
#define HMIMO_SPECIAL_FUNCTIONS_HPP

#include <limits>
#include <vector>

namespace hmimo::special {

/// Truncation control for the infinite series used by the analytic
/// throughput expressions.
struct SeriesControl {
  double rel_tol = 1e-10;
  int max_terms = 500;

  void validate() const;
};

/// A real number stored as sign * exp(log_abs). sign is -1, 0 or +1.
struct SignedLog {
  double log_abs = -std::numeric_limits<double>::infinity();
  int sign = 0;

  double value() const;
  static SignedLog from(double x);
};

SignedLog operator*(const SignedLog& a, const SignedLog& b);

/// Sum of signed-log terms with a running scale; never forms an
/// intermediate that overflows as long as the result itself fits.
class LogSumAccumulator {
public:
  void add(const SignedLog& term);
  SignedLog result() const;
  /// Largest |term| added so far, in log form.
  double max_log_term() const { return max_log_; }

private:
  double scale_log_ = -std::numeric_limits<double>::infinity();
  double sum_ = 0.0;  // in units of exp(scale_log_)
  double max_log_ = -std::numeric_limits<double>::infinity();
};

/// ln Gamma(x) for x > 0.
double log_gamma(double x);

/// ln |(a)_n| with the sign of the rising factorial (a)_n = a (a+1) ... (a+n-1).
/// Valid for any real a; a zero factor gives sign 0.
SignedLog log_pochhammer(double a, int n);

/// ln(e^x Gamma(a, x)) for any real order a and x > 0.
double log_upper_incomplete_gamma_scaled(double a, double x);

/// e^x Gamma(a, x).
double upper_incomplete_gamma_scaled(double a, double x);

/// ln(e^x Gamma(a - n, x)) for n = 0 .. count-1, sharing one recurrence
/// sweep where that is stable.
std::vector<double> log_upper_incomplete_gamma_scaled_ladder(double a, double x, int count);

/// E1(x) for x > 0.
double exponential_integral_e1(double x);

/// e^x E1(x) for x > 0; finite for any x where E1 underflows.
double scaled_exponential_integral_e1(double x);

/// Ei(x) for x < 0, i.e. -E1(-x).
double exponential_integral_ei(double x);

/// y e^y Ei(-y) for y > 0, in (-1, 0).
double scaled_ei_product(double y);

/// e^y E2(y) = 1 + y e^y Ei(-y) for y > 0, in (0, 1); no cancellation at
/// large y.
double scaled_exponential_integral_e2(double y);

/// Kummer's confluent hypergeometric 1F1(a; b; z) by direct summation.
double kummer_1f1(double a, double b, double z, const SeriesControl& ctrl = {});

/// ln |1F1(a; b; z)| with sign; safe where 1F1 itself overflows.
SignedLog log_kummer_1f1(double a, double b, double z, const SeriesControl& ctrl = {});

}  // namespace hmimo::special

#endif  // HMIMO_SPECIAL_FUNCTIONS_HPP
