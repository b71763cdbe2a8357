// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The hmimo Authors

#include "hmimo/special_functions.hpp"

#include <cmath>
#include <string>

#include "hmimo/types.hpp"

namespace hmimo::special {
namespace {

constexpr double kEps = 1e-16;
constexpr double kTiny = 1e-300;
constexpr double kEulerGamma = 0.57721566490153286061;
constexpr int kMaxContinuedFraction = 200000;

// ln(e^x Gamma(a, x)) from the Legendre continued fraction, modified Lentz.
// Requires x + 1 - a > 0; converges quickly once x >= 1 or x > a.
double log_scaled_gamma_cf(double a, double x) {
  double b = x + 1.0 - a;
  double c = 1.0 / kTiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < kMaxContinuedFraction; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < kTiny) d = kTiny;
    c = b + an / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < kEps) return a * std::log(x) + std::log(h);
  }
  throw NumericalError("upper incomplete gamma: continued fraction did not converge (a=" +
                       std::to_string(a) + ", x=" + std::to_string(x) + ")");
}

// ln(e^x Gamma(a, x)) for x >> |a| from the asymptotic expansion
// x^(a-1) (1 + (a-1)/x + (a-1)(a-2)/x^2 + ...).
bool use_asymptotic(double a, double x) { return x >= 1e3 && x >= 40.0 * (std::abs(a) + 1.0); }

double log_scaled_gamma_asymptotic(double a, double x) {
  double term = 1.0;
  double sum = 1.0;
  for (int n = 1; n < 200; ++n) {
    term *= (a - n) / x;
    sum += term;
    if (std::abs(term) < kEps * std::abs(sum)) break;
  }
  return (a - 1.0) * std::log(x) + std::log(sum);
}

// ln(e^x Gamma(a, x)) for a > 0, x < a + 1 via the lower-gamma series.
double log_scaled_gamma_series(double a, double x) {
  double ap = a;
  double del = 1.0 / a;
  double sum = del;
  for (int n = 0; n < kMaxContinuedFraction; ++n) {
    ap += 1.0;
    del *= x / ap;
    sum += del;
    if (std::abs(del) < std::abs(sum) * kEps) {
      const double lg = std::lgamma(a);
      const double p = std::exp(a * std::log(x) - x - lg) * sum;  // regularized lower
      return x + lg + std::log1p(-p);
    }
  }
  throw NumericalError("upper incomplete gamma: series did not converge");
}

// Gamma(a, x) for a in (0, 1], x < 1. Cancellation between Gamma(a) and
// x^a / a is removed analytically.
double upper_gamma_base(double a, double x) {
  if (a == 1.0) return std::exp(-x);
  const double gamma1p_minus_1 = std::expm1(std::lgamma(1.0 + a));
  const double xa_minus_1 = std::expm1(a * std::log(x));
  double head = (gamma1p_minus_1 - xa_minus_1) / a;
  double term = 1.0;
  double tail = 0.0;
  for (int n = 1; n < 200; ++n) {
    term *= -x / n;
    const double add = term / (a + n);
    tail += add;
    if (std::abs(add) < kEps * std::abs(tail)) break;
  }
  return head - std::exp(a * std::log(x)) * tail;
}

// Downward recurrence in normalized form T(b) = e^x Gamma(b, x) x^-b, which
// stays O(1 / |b|) for x < 1 while e^x Gamma(b, x) itself may overflow.
class DownwardLadder {
public:
  DownwardLadder(double a_top, double x) : x_(x) {
    order_ = a_top - std::ceil(a_top) + 1.0;  // in (0, 1]
    t_ = std::exp(x) * upper_gamma_base(order_, x) * std::pow(x, -order_);
  }

  double order() const { return order_; }

  // ln(e^x Gamma(order, x)) at the current order.
  double log_value() const {
    if (!(t_ > 0.0)) {
      throw NumericalError("upper incomplete gamma: recurrence lost positivity");
    }
    return order_ * std::log(x_) + std::log(t_);
  }

  void step_down() {
    order_ -= 1.0;
    // Integer orders pass through 0, where the recurrence divides by zero;
    // Gamma(0, x) = E1(x) restarts it.
    t_ = order_ == 0.0 ? scaled_exponential_integral_e1(x_) : (x_ * t_ - 1.0) / order_;
  }

private:
  double x_;
  double order_;
  double t_;
};

// e^y E_n(y) ~ (1/y) sum_k (-1)^k (n)_k / y^k for large y.
double scaled_expint_asymptotic(int n, double y) {
  double term = 1.0;
  double sum = 1.0;
  for (int k = 0; k < 200; ++k) {
    term *= -(n + k) / y;
    sum += term;
    if (std::abs(term) < kEps * std::abs(sum)) break;
  }
  return sum / y;
}

constexpr double kAsymptoticExpint = 1e3;

}  // namespace

void SeriesControl::validate() const {
  require(rel_tol > 0.0, "SeriesControl: rel_tol must be positive");
  require(max_terms >= 1, "SeriesControl: max_terms must be >= 1");
}

double SignedLog::value() const {
  if (sign == 0) return 0.0;
  return sign * std::exp(log_abs);
}

SignedLog SignedLog::from(double x) {
  if (x == 0.0) return {};
  return {std::log(std::abs(x)), x > 0.0 ? 1 : -1};
}

SignedLog operator*(const SignedLog& a, const SignedLog& b) {
  if (a.sign == 0 || b.sign == 0) return {};
  return {a.log_abs + b.log_abs, a.sign * b.sign};
}

void LogSumAccumulator::add(const SignedLog& term) {
  if (term.sign == 0) return;
  if (term.log_abs > max_log_) max_log_ = term.log_abs;
  if (term.log_abs > scale_log_) {
    sum_ = sum_ * std::exp(scale_log_ - term.log_abs) + term.sign;
    scale_log_ = term.log_abs;
  } else {
    sum_ += term.sign * std::exp(term.log_abs - scale_log_);
  }
}

SignedLog LogSumAccumulator::result() const {
  if (sum_ == 0.0) return {};
  return {scale_log_ + std::log(std::abs(sum_)), sum_ > 0.0 ? 1 : -1};
}

double log_gamma(double x) {
  require(x > 0.0, "log_gamma: argument must be positive");
  return std::lgamma(x);
}

SignedLog log_pochhammer(double a, int n) {
  require(n >= 0, "log_pochhammer: n must be nonnegative");
  if (n == 0) return {0.0, 1};
  constexpr int kDirect = 32;
  int sign = 1;
  double log_abs = 0.0;
  int k = 0;
  // Nonpositive factors a + k <= 0 are handled one by one.
  for (; k < n && a + k <= 0.0; ++k) {
    const double f = a + k;
    if (f == 0.0) return {};
    sign = -sign;
    log_abs += std::log(-f);
  }
  if (k == n) return {log_abs, sign};
  const double base = a + k;
  const int remaining = n - k;
  if (remaining <= kDirect) {
    for (int m = 0; m < remaining; ++m) log_abs += std::log(base + m);
  } else {
    log_abs += std::lgamma(base + remaining) - std::lgamma(base);
  }
  return {log_abs, sign};
}

double log_upper_incomplete_gamma_scaled(double a, double x) {
  require(x > 0.0, "upper_incomplete_gamma_scaled: x must be positive");
  if (a > 0.0 && x < a + 1.0) return log_scaled_gamma_series(a, x);
  if (use_asymptotic(a, x)) return log_scaled_gamma_asymptotic(a, x);
  if (x >= 1.0) return log_scaled_gamma_cf(a, x);
  // a <= 0, x < 1
  DownwardLadder ladder(a, x);
  while (ladder.order() > a + 0.5) ladder.step_down();
  return ladder.log_value();
}

double upper_incomplete_gamma_scaled(double a, double x) {
  return std::exp(log_upper_incomplete_gamma_scaled(a, x));
}

std::vector<double> log_upper_incomplete_gamma_scaled_ladder(double a, double x, int count) {
  require(x > 0.0, "upper_incomplete_gamma_scaled: x must be positive");
  require(count >= 0, "ladder count must be nonnegative");
  std::vector<double> out(static_cast<std::size_t>(count));
  if (count == 0) return out;
  if (x >= 1.0) {
    for (int n = 0; n < count; ++n) out[n] = log_upper_incomplete_gamma_scaled(a - n, x);
    return out;
  }
  int n = 0;
  for (; n < count && a - n > 0.0; ++n) out[n] = log_upper_incomplete_gamma_scaled(a - n, x);
  if (n == count) return out;
  DownwardLadder ladder(a - n, x);
  while (ladder.order() > a - n + 0.5) ladder.step_down();
  for (; n < count; ++n) {
    out[n] = ladder.log_value();
    ladder.step_down();
  }
  return out;
}

double scaled_exponential_integral_e1(double x) {
  require(x > 0.0, "E1: argument must be positive");
  if (x < 1.0) return std::exp(x) * exponential_integral_e1(x);
  if (x >= kAsymptoticExpint) return scaled_expint_asymptotic(1, x);
  double b = x + 1.0;
  double c = 1.0 / kTiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < kMaxContinuedFraction; ++i) {
    const double an = -static_cast<double>(i) * i;
    b += 2.0;
    d = 1.0 / (an * d + b);
    c = b + an / c;
    const double del = c * d;
    h *= del;
    if (std::abs(del - 1.0) < kEps) return h;
  }
  throw NumericalError("E1: continued fraction did not converge");
}

double exponential_integral_e1(double x) {
  require(x > 0.0, "E1: argument must be positive");
  if (x >= 1.0) return std::exp(-x) * scaled_exponential_integral_e1(x);
  double sum = 0.0;
  double fact = 1.0;
  for (int k = 1; k < 200; ++k) {
    fact *= -x / k;
    const double del = -fact / k;
    sum += del;
    if (std::abs(del) < std::abs(sum) * kEps) break;
  }
  return -kEulerGamma - std::log(x) + sum;
}

double exponential_integral_ei(double x) {
  require(x < 0.0, "Ei: only negative arguments are supported");
  return -exponential_integral_e1(-x);
}

double scaled_ei_product(double y) {
  require(y > 0.0, "scaled_ei_product: argument must be positive");
  return -y * scaled_exponential_integral_e1(y);
}

double scaled_exponential_integral_e2(double y) {
  require(y > 0.0, "E2: argument must be positive");
  if (y < 1.0) return 1.0 - y * std::exp(y) * exponential_integral_e1(y);
  if (y >= kAsymptoticExpint) return scaled_expint_asymptotic(2, y);
  double b = y + 2.0;
  double c = 1.0 / kTiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < kMaxContinuedFraction; ++i) {
    const double an = -static_cast<double>(i) * (1.0 + i);
    b += 2.0;
    d = 1.0 / (an * d + b);
    c = b + an / c;
    const double del = c * d;
    h *= del;
    if (std::abs(del - 1.0) < kEps) return h;
  }
  throw NumericalError("E2: continued fraction did not converge");
}

SignedLog log_kummer_1f1(double a, double b, double z, const SeriesControl& ctrl) {
  ctrl.validate();
  require(!(b <= 0.0 && b == std::floor(b)), "kummer_1f1: b must not be a nonpositive integer");
  // Terms are kept relative to a running scale so that e^z-sized sums fit.
  constexpr double kRescale = 1e250;
  double scale_log = 0.0;
  double term = 1.0;
  double sum = 1.0;
  double prev_abs = 1.0;
  for (int j = 0; j < ctrl.max_terms; ++j) {
    const double ratio = (a + j) * z / ((b + j) * (j + 1.0));
    term *= ratio;
    if (term == 0.0) return SignedLog{scale_log, 1} * SignedLog::from(sum);
    sum += term;
    const double cur_abs = std::abs(term);
    const double r = std::abs((a + j + 1.0) * z / ((b + j + 1.0) * (j + 2.0)));
    if (cur_abs <= prev_abs && r < 1.0 &&
        cur_abs * r / (1.0 - r) <= ctrl.rel_tol * std::abs(sum)) {
      return SignedLog{scale_log, 1} * SignedLog::from(sum);
    }
    prev_abs = cur_abs;
    if (std::abs(sum) > kRescale || cur_abs > kRescale) {
      sum /= kRescale;
      term /= kRescale;
      prev_abs /= kRescale;
      scale_log += std::log(kRescale);
    }
  }
  throw NumericalError("kummer_1f1: series did not converge within max_terms (a=" +
                       std::to_string(a) + ", b=" + std::to_string(b) +
                       ", z=" + std::to_string(z) + ")");
}

double kummer_1f1(double a, double b, double z, const SeriesControl& ctrl) {
  return log_kummer_1f1(a, b, z, ctrl).value();
}

}  // namespace hmimo::special
