// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The hmimo Authors

#ifndef HMIMO_COUPLING_HPP
#define HMIMO_COUPLING_HPP

#include <span>
#include <vector>

#include "hmimo/geometry.hpp"
#include "hmimo/types.hpp"

namespace hmimo {

enum class SincConvention {
  unnormalized,  ///< sin(x)/x
  normalized,    ///< sin(pi x)/(pi x)
};

/// Deterministic part of the effective channel: coupling C, excitation I,
/// R = C I and the correlation Q = R R^H.
struct CouplingModel {
  RMatrix coupling;     ///< C, real symmetric, unit diagonal
  CVector excitation;   ///< diagonal of I
  CMatrix combined;     ///< R = C I
  CMatrix correlation;  ///< Q = R R^H

  int size() const { return static_cast<int>(coupling.rows()); }
};

/// Eigen-decomposition of Q, eigenvalues sorted descending.
struct Spectrum {
  RVector eigenvalues;
  CMatrix eigenvectors;

  int size() const { return static_cast<int>(eigenvalues.size()); }
};

/// [C]_{n,m} = sinc(2 pi |a_n - a_m| / lambda).
RMatrix coupling_matrix(const ArrayGeometry& geometry, double wavelength_m,
                        SincConvention convention = SincConvention::unnormalized);

/// Unit-modulus excitation with i.i.d. uniform phases on [0, 2 pi).
CVector excitation_matrix(int num_elements, Rng& rng);

CMatrix correlation_matrix(const RMatrix& coupling, const CVector& excitation);

CouplingModel make_coupling_model(const RMatrix& coupling, const CVector& excitation);

/// Hermitian EVD after symmetrization. Eigenvalues in (-1e-10 max, 0) are
/// clamped to zero; anything more negative throws NumericalError.
Spectrum hermitian_evd(const CMatrix& q);

/// L(lambda, n) = sum_i lambda_i^n.
double spectral_sum(const Spectrum& spectrum, int power);
double spectral_sum(const RVector& eigenvalues, int power);

/// G(sigma, n) = sum_j sigma_j^n over interferer standard deviations, given
/// their variances sigma_j^2.
double variance_sum(std::span<const double> interferer_variances, int power);

/// Variances of every user except `k`.
std::vector<double> interferer_variances(std::span<const double> variances, int k);

}  // namespace hmimo

#endif  // HMIMO_COUPLING_HPP
