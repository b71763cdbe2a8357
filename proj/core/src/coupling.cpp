// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The hmimo Authors

#include "hmimo/coupling.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <Eigen/Eigenvalues>

namespace hmimo {

RMatrix coupling_matrix(const ArrayGeometry& geometry, double wavelength_m,
                        SincConvention convention) {
  require(wavelength_m > 0.0, "coupling_matrix: wavelength must be positive");
  const int m = geometry.size();
  RMatrix c = RMatrix::Identity(m, m);
  const double k = 2.0 * std::numbers::pi / wavelength_m;
  for (int n = 0; n < m; ++n) {
    for (int j = n + 1; j < m; ++j) {
      const double dx = geometry.positions[n][0] - geometry.positions[j][0];
      const double dy = geometry.positions[n][1] - geometry.positions[j][1];
      const double dist = std::hypot(dx, dy);
      require(dist > 0.0, "coupling_matrix: element positions must be pairwise distinct");
      double x = k * dist;
      if (convention == SincConvention::normalized) x *= std::numbers::pi;
      const double v = std::sin(x) / x;
      c(n, j) = v;
      c(j, n) = v;
    }
  }
  return c;
}

CVector excitation_matrix(int num_elements, Rng& rng) {
  require(num_elements >= 1, "excitation_matrix: M must be >= 1");
  std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);
  CVector i(num_elements);
  for (int m = 0; m < num_elements; ++m) i(m) = std::polar(1.0, phase(rng));
  return i;
}

CMatrix correlation_matrix(const RMatrix& coupling, const CVector& excitation) {
  require(coupling.rows() == coupling.cols() && coupling.rows() == excitation.size(),
          "correlation_matrix: dimension mismatch");
  const CMatrix r = coupling.cast<cdouble>() * excitation.asDiagonal();
  CMatrix q = r * r.adjoint();
  return (q + q.adjoint()) * 0.5;
}

CouplingModel make_coupling_model(const RMatrix& coupling, const CVector& excitation) {
  require(coupling.rows() == coupling.cols() && coupling.rows() == excitation.size(),
          "make_coupling_model: dimension mismatch");
  CouplingModel model;
  model.coupling = coupling;
  model.excitation = excitation;
  model.combined = coupling.cast<cdouble>() * excitation.asDiagonal();
  model.correlation = correlation_matrix(coupling, excitation);
  return model;
}

Spectrum hermitian_evd(const CMatrix& q) {
  require(q.rows() == q.cols() && q.rows() > 0, "hermitian_evd: matrix must be square");
  const CMatrix sym = (q + q.adjoint()) * 0.5;
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(sym);
  if (solver.info() != Eigen::Success) throw NumericalError("hermitian_evd: eigensolver failed");

  const int m = static_cast<int>(q.rows());
  // Eigen sorts ascending; reverse to descending.
  Spectrum s;
  s.eigenvalues.resize(m);
  s.eigenvectors.resize(m, m);
  for (int i = 0; i < m; ++i) {
    s.eigenvalues(i) = solver.eigenvalues()(m - 1 - i);
    s.eigenvectors.col(i) = solver.eigenvectors().col(m - 1 - i);
  }
  const double largest = std::max(s.eigenvalues(0), 0.0);
  const double floor = -1e-10 * largest;
  for (int i = 0; i < m; ++i) {
    double& lambda = s.eigenvalues(i);
    if (lambda < 0.0) {
      if (lambda < floor || largest == 0.0) {
        throw NumericalError("hermitian_evd: significantly negative eigenvalue " +
                             std::to_string(lambda));
      }
      lambda = 0.0;
    }
  }
  return s;
}

double spectral_sum(const RVector& eigenvalues, int power) {
  double sum = 0.0;
  for (double v : eigenvalues) sum += std::pow(v, power);
  return sum;
}

double spectral_sum(const Spectrum& spectrum, int power) {
  return spectral_sum(spectrum.eigenvalues, power);
}

double variance_sum(std::span<const double> interferer_variances, int power) {
  double sum = 0.0;
  for (double v : interferer_variances) sum += std::pow(std::sqrt(v), power);
  return sum;
}

std::vector<double> interferer_variances(std::span<const double> variances, int k) {
  require(k >= 0 && k < static_cast<int>(variances.size()), "interferer_variances: bad user index");
  std::vector<double> out;
  out.reserve(variances.size() - 1);
  for (int j = 0; j < static_cast<int>(variances.size()); ++j) {
    if (j != k) out.push_back(variances[j]);
  }
  return out;
}

}  // namespace hmimo
