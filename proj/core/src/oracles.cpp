// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The hmimo Authors

#include <algorithm>
#include <cmath>

// Boost 1.74 tanh_sinh asserts on a branch it then handles correctly.
#define BOOST_DISABLE_ASSERTS
#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include "hmimo/oracles.hpp"

namespace hmimo::oracle {
namespace {

using boost::math::quadrature::exp_sinh;
using boost::math::quadrature::gauss_kronrod;
using boost::math::quadrature::tanh_sinh;

constexpr double kTol = 1e-12;

// Integral of f over [0, inf) for a density-like integrand concentrated
// around `center` with spread `width`. When `cutoff` is positive the range
// ends there instead of at infinity.
template <class F>
double integrate_half_line(F f, double center, double width, double cutoff = 0.0) {
  // Work in u = x / width so that node spacing is independent of scale.
  auto g = [&](double u) { return f(u * width); };
  const double c = center / width;
  const double lo = std::max(0.0, c - 10.0);
  const double hi = c + 12.0;
  // tanh-sinh tolerates the x^(shape-1) endpoint singularity at 0.
  tanh_sinh<double> finite;
  double total = 0.0;
  if (lo > 0.0) total += finite.integrate(g, 0.0, lo, kTol);
  const int pieces = 8;
  for (int n = 0; n < pieces; ++n) {
    const double a = lo + (hi - lo) * n / pieces;
    const double b = lo + (hi - lo) * (n + 1) / pieces;
    total += finite.integrate(g, a, b, kTol);
  }
  if (cutoff > 0.0) {
    const double end = cutoff / width;
    if (end > hi) total += finite.integrate(g, hi, end, kTol);
  } else {
    exp_sinh<double> tail;
    total += tail.integrate([&](double u) { return g(hi + u); }, kTol);
  }
  return total * width;
}

double gamma_log_pdf(double x, double shape, double scale) {
  return (shape - 1.0) * std::log(x) - x / scale - shape * std::log(scale) - std::lgamma(shape);
}

}  // namespace

double upper_incomplete_gamma_scaled(double a, double x) {
  require(x > 0.0, "x must be positive");
  exp_sinh<double> integrator;
  return integrator.integrate([&](double u) { return std::pow(x + u, a - 1.0) * std::exp(-u); },
                              kTol);
}

double exponential_integral_e1(double x) {
  require(x > 0.0, "x must be positive");
  exp_sinh<double> integrator;
  return integrator.integrate([&](double u) { return std::exp(-x * (1.0 + u)) / (1.0 + u); },
                              kTol);
}

double full_csi_sigma(const GammaApproxParams& p, double rho) {
  p.validate();
  const double m1 = p.nu * p.theta;
  const double w1 = std::sqrt(p.nu) * p.theta;
  const double m3 = p.mu * p.phi;
  const double w3 = std::sqrt(p.mu) * p.phi;
  // Both marginals decay like exp(-x / scale); far past the bulk the density
  // is negligible, which keeps the series inside the pdf short.
  const double hi1 = m1 + 12.0 * w1;
  const double cut1 = hi1 + 60.0 * p.theta;
  const double hi3 = m3 + 12.0 * w3;
  const double cut3 = hi3 + 60.0 * p.phi;
  special::SeriesControl ctrl;
  ctrl.max_terms = 20000;
  auto inner = [&](double x3) {
    if (!(x3 > 0.0)) return 0.0;
    auto f = [&](double x1) { return x1 > 0.0 ? x1 * x1 * bivariate_gamma_pdf(x1, x3, p, ctrl) : 0.0; };
    // x1^(nu+1) is smooth at 0 for the shapes of interest; Gauss-Kronrod suffices.
    double total = 0.0;
    constexpr int kPieces = 4;
    for (int n = 0; n < kPieces; ++n) {
      total += gauss_kronrod<double, 31>::integrate(f, hi1 * n / kPieces, hi1 * (n + 1) / kPieces,
                                                    10, 1e-11);
    }
    return rho / (1.0 + rho * x3) * (total + gauss_kronrod<double, 31>::integrate(f, hi1, cut1, 10, 1e-11));
  };
  tanh_sinh<double> singular;
  const double bulk = singular.integrate(inner, 0.0, hi3, 1e-9);
  return bulk + gauss_kronrod<double, 31>::integrate(inner, hi3, cut3, 10, 1e-10);
}

double full_csi_sigma_independent(const GammaApproxParams& p, double rho) {
  p.validate();
  const double second = p.theta * p.theta * p.nu * (p.nu + 1.0);
  auto f = [&](double x3) {
    if (!(x3 > 0.0)) return 0.0;
    return std::exp(gamma_log_pdf(x3, p.mu, p.phi)) / (1.0 + rho * x3);
  };
  return rho * second * integrate_half_line(f, p.mu * p.phi, std::sqrt(p.mu) * p.phi);
}

double partial_csi_sigma(double beta, double sigma_k2, double g2, double rho) {
  auto f = [&](double x) { return beta * std::exp(-beta * x) * rho * sigma_k2 * x / (1.0 + rho * g2 * x); };
  return integrate_half_line(f, 1.0 / beta, 1.0 / beta);
}

double no_csi_sigma(double beta, double rho) {
  auto f = [&](double x) { return beta * std::exp(-beta * x) * rho * x / (1.0 + rho * x); };
  return integrate_half_line(f, 1.0 / beta, 1.0 / beta);
}

}  // namespace hmimo::oracle
