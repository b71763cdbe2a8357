// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The hmimo Authors

#include <doctest.h>

#include <cmath>
#include <limits>

#include <boost/math/distributions/gamma.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "hmimo/analytic.hpp"
#include "hmimo/coupling.hpp"
#include "hmimo/oracles.hpp"
#include "hmimo/random.hpp"

using namespace hmimo;

namespace {

GammaApproxParams params(double nu, double theta, double mu, double phi, double eta) {
  GammaApproxParams p;
  p.nu = nu;
  p.theta = theta;
  p.mu = mu;
  p.phi = phi;
  p.eta = eta;
  return p;
}

Spectrum spectrum_16() {
  const double lambda = kSpeedOfLight / 1.6e9;
  const ArrayGeometry g = build_array_geometry(16, ArrayMode::fixed_spacing, lambda / 2.0);
  Rng rng = make_stream(1, 2);
  return hermitian_evd(make_coupling_model(coupling_matrix(g, lambda), excitation_matrix(16, rng)).correlation);
}

}  // namespace

TEST_CASE("bivariate gamma pdf reduces to a product at eta = 0") {
  const GammaApproxParams p = params(3.0, 0.7, 2.2, 1.3, 0.0);
  const boost::math::gamma_distribution<double> g1(p.nu, p.theta), g3(p.mu, p.phi);
  for (double x1 : {0.5, 2.0, 4.5}) {
    for (double x3 : {0.3, 2.5}) {
      CHECK(bivariate_gamma_pdf(x1, x3, p) ==
            doctest::Approx(boost::math::pdf(g1, x1) * boost::math::pdf(g3, x3)).epsilon(1e-10));
    }
  }
}

TEST_CASE("bivariate gamma pdf keeps its marginals") {
  const GammaApproxParams p = params(3.0, 0.7, 2.2, 1.3, 0.4);
  const boost::math::gamma_distribution<double> g1(p.nu, p.theta);
  // The Gamma(2.2, 1.3) tail past 80 is below 1e-24.
  for (double x1 : {0.8, 2.5}) {
    const double marginal = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
        [&](double x3) { return bivariate_gamma_pdf(x1, x3, p); }, 0.0, 80.0, 12, 1e-12);
    CHECK(marginal == doctest::Approx(boost::math::pdf(g1, x1)).epsilon(1e-7));
  }
  CHECK(bivariate_gamma_correlation(p) == doctest::Approx(0.4 * std::sqrt(3.0 / 2.2)));
}

TEST_CASE("double series against frozen mpmath values") {
  struct Row { double nu, theta, mu, phi, eta, rho, want; };
  const Row rows[] = {
      {6.0, 0.5, 2.5, 1.2, 0.3, 2.0, 3.3532505473136235057},
      {12.3, 0.2, 1.7, 3.1, 0.45, 0.5, 0.86906696171453187763},
      {4.0, 1.0, 3.0, 0.8, 0.0, 1.5, 7.9267408670755235397},
  };
  for (const Row& r : rows) {
    const SeriesSum s = full_csi_sigma(params(r.nu, r.theta, r.mu, r.phi, r.eta), r.rho);
    CAPTURE(r.nu);
    CHECK(std::abs(s.value - r.want) / r.want < 5e-10);
    CHECK(s.outer_terms >= 1);
  }
}

TEST_CASE("double series agrees with the independent 1-D oracle at eta = 0") {
  const GammaApproxParams p = params(5.5, 0.4, 1.8, 2.0, 0.0);
  for (double rho : {0.01, 1.0, 30.0}) {
    CHECK(full_csi_sigma(p, rho).value == doctest::Approx(oracle::full_csi_sigma_independent(p, rho)).epsilon(1e-8));
  }
}

TEST_CASE("double series increases with rho") {
  const GammaApproxParams p = params(6.0, 0.5, 2.5, 1.2, 0.3);
  double prev = 0.0;
  for (double rho = 0.01; rho < 200.0; rho *= 2.5) {
    const double v = full_csi_sigma(p, rho).value;
    CHECK(v > prev);
    prev = v;
  }
  CHECK_THROWS_AS(full_csi_sigma(p, 0.0), InvalidArgument);
}

TEST_CASE("exact moments of the quadratic forms") {
  RVector lam(3);
  lam << 2.0, 1.0, 0.5;
  const std::vector<double> others{0.5, 2.0};
  const QuadraticFormMoments m = quadratic_form_moments(lam, 1.5, others);
  CHECK(m.mean_x1 == doctest::Approx(1.5 * 3.5));
  CHECK(m.var_x1 == doctest::Approx(2.25 * 5.25));
  CHECK(m.mean_x3 == doctest::Approx(1.5 * 5.25 * 2.5));
  CHECK(m.cov_x1_x3 == doctest::Approx(2.25 * 9.125 * 2.5));
  CHECK(m.correlation() > 0.0);
  CHECK(m.correlation() < 1.0);

  const GammaApproxParams p = moment_match_gamma(lam, 1.5, others);
  CHECK(p.nu * p.theta == doctest::Approx(m.mean_x1));
  CHECK(p.nu * p.theta * p.theta == doctest::Approx(m.var_x1));
  CHECK(p.mu * p.phi == doctest::Approx(m.mean_x3));
  // Matched convention: the law reproduces the target correlation.
  CHECK(bivariate_gamma_correlation(p) == doctest::Approx(p.correlation));
}

TEST_CASE("exact moment matching is scale invariant, the literal one is not") {
  const Spectrum s = spectrum_16();
  const std::vector<double> small(7, 1e-3), large(7, 1e3);
  const GammaApproxParams a = moment_match_gamma(s, 1e-3, small);
  const GammaApproxParams b = moment_match_gamma(s, 1e3, large);
  CHECK(a.correlation == doctest::Approx(b.correlation).epsilon(1e-10));
  CHECK(a.eta == doctest::Approx(b.eta).epsilon(1e-10));
  CHECK(a.nu == doctest::Approx(b.nu).epsilon(1e-10));
  CHECK_NOTHROW(moment_match_gamma(s, 1e-3, small, MomentMatching::literal));
  CHECK_THROWS_AS(moment_match_gamma(s, 1e3, large, MomentMatching::literal), NumericalError);
}

TEST_CASE("beta for a hand-checked 2x2 correlation") {
  CMatrix q(2, 2);
  q << 1.0, 0.5, 0.5, 1.0;
  // Row sums 1.5 and 1.5: 1/beta = 2.25 + 2.25.
  CHECK(beta_parameter(q, 1.0).beta == doctest::Approx(1.0 / 4.5));
  CHECK(beta_parameter(q, 2.0).mean() == doctest::Approx(9.0));
  CHECK(beta_parameter(q, 1.0, BetaMode::literal).beta == doctest::Approx(1.0 / 9.0));
}

TEST_CASE("partial and no-CSI closed forms match quadrature") {
  for (double rho : {0.01, 0.3, 10.0, 1000.0}) {
    const ExpApproxParams b{0.7};
    CHECK(std::expm1(throughput_no_csi(b, rho).value) ==
          doctest::Approx(oracle::no_csi_sigma(b.beta, rho)).epsilon(1e-9));
    CHECK(std::expm1(throughput_partial_csi(b, 0.5, 3.0, rho).value) ==
          doctest::Approx(oracle::partial_csi_sigma(b.beta, 0.5, 3.0, rho)).epsilon(1e-9));
  }
}

TEST_CASE("closed-form limits") {
  const ExpApproxParams b{0.7};
  // High SNR: rho X / (1 + rho X) -> 1, partial -> sigma_k^2 / G2.
  CHECK(throughput_no_csi(b, 1e9).value == doctest::Approx(std::log(2.0)).epsilon(1e-6));
  CHECK(throughput_partial_csi(b, 0.5, 3.0, 1e9).value == doctest::Approx(std::log1p(0.5 / 3.0)).epsilon(1e-6));
  // Low SNR: Sigma_bar ~ rho E[X].
  CHECK(throughput_no_csi(b, 1e-8).value == doctest::Approx(1e-8 / 0.7).epsilon(1e-6));
  CHECK(throughput_partial_csi(b, 0.5, 3.0, 1e-8).value == doctest::Approx(1e-8 * 0.5 / 0.7).epsilon(1e-6));
  CHECK_THROWS_AS(throughput_partial_csi(b, 0.5, 0.0, 1.0), InvalidArgument);
}

TEST_CASE("single user and mode dispatch") {
  const Spectrum s = spectrum_16();
  const double l1 = spectral_sum(s, 1), l2 = spectral_sum(s, 2);
  CHECK(throughput_single_user(s.eigenvalues, 2.0, 0.1).value ==
        doctest::Approx(std::log1p(0.1 * 4.0 * (l2 + l1 * l1))));
  CMatrix q = s.eigenvectors * s.eigenvalues.cast<cdouble>().asDiagonal() * s.eigenvectors.adjoint();
  const std::vector<double> one{2.0};
  CHECK(analytic_user_throughputs(s, q, one, 0.1, CsiMode::full)[0] ==
        doctest::Approx(throughput_single_user(s.eigenvalues, 2.0, 0.1).value));
  const std::vector<double> eq(8, 1.0);
  const auto full = analytic_user_throughputs(s, q, eq, 1.0, CsiMode::full);
  REQUIRE(full.size() == 8);
  for (double v : full) CHECK(v == doctest::Approx(full[0]));
  CHECK_THROWS_AS(analytic_user_throughputs(s, q, eq, 1.0, CsiMode::optimal), InvalidArgument);
}
