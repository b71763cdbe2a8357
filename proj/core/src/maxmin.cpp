// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The hmimo Authors

#include "hmimo/maxmin.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <boost/math/tools/roots.hpp>

namespace hmimo {
namespace {

struct DualState {
  bool feasible = false;
  bool converged = false;
  Eigen::VectorXd q;
  int iterations = 0;
};

// A = G (N0 I + diag(q) G)^-1 with G = H H^H, so that
// A_kj = h_k (N0 I + H^H diag(q) H)^-1 h_j^H.
CMatrix coupling_gains(const CMatrix& gram, const Eigen::VectorXd& q, double n0,
                       CMatrix* b_out = nullptr) {
  CMatrix m = q.cast<cdouble>().asDiagonal() * gram;
  m.diagonal().array() += n0;
  const CMatrix b = m.partialPivLu().inverse();
  if (b_out) *b_out = b;
  return gram * b;
}

// Solves q = T(q), T_k(q) = t / c_k(q), where c_k is the exclusive MMSE gain
// a_kk / (1 - q_k a_kk). T is concave and monotone. Plain iteration from
// q = 0, or from the solution for any smaller t, climbs towards the minimal
// fixed point from below, so the target is infeasible once sum q exceeds P. Because F(q) = q - T(q) is convex, a
// Newton step taken from below lands above the fixed point whenever its
// Jacobian has a nonnegative inverse; from there Newton descends
// monotonically with quadratic convergence.
DualState solve_dual(const CMatrix& gram, double t, double power_w, double n0, int max_iter,
                     const Eigen::VectorXd* start = nullptr) {
  const Eigen::Index k = gram.rows();
  DualState s;
  s.q = start ? *start : Eigen::VectorXd::Zero(k);
  if (t <= 0.0) {
    s.feasible = s.converged = true;
    return s;
  }
  // 1 - q_k a_kk cancels as t grows, so the attainable accuracy scales with t.
  const double tol = 32.0 * std::numeric_limits<double>::epsilon() * (1.0 + t);
  bool above = false;
  for (int it = 1; it <= max_iter; ++it) {
    const CMatrix a = coupling_gains(gram, s.q, n0);
    Eigen::VectorXd image(k);
    RMatrix jac = RMatrix::Identity(k, k);
    for (Eigen::Index i = 0; i < k; ++i) {
      const double aii = a(i, i).real();
      image[i] = t * (1.0 - s.q[i] * aii) / aii;
      for (Eigen::Index j = 0; j < k; ++j) {
        if (j != i) jac(i, j) = -t * std::norm(a(i, j)) / (aii * aii);
      }
    }
    const Eigen::VectorXd newton = s.q - jac.partialPivLu().solve(s.q - image);
    const double slack = 1e-12 * std::max(s.q.sum(), image.sum());
    Eigen::VectorXd next;
    if (above) {
      if (!newton.allFinite() || (newton.array() > s.q.array() + slack).any()) return s;
      next = newton;
    } else if (newton.allFinite() && (newton.array() >= image.array() - slack).all()) {
      next = newton;
      above = true;
    } else {
      next = image;
    }
    const double change = (next - s.q).cwiseAbs().maxCoeff();
    s.q = next;
    s.iterations = it;
    if (!above && !(s.q.sum() <= power_w)) return s;  // below q*, already over budget
    if (change <= tol * s.q.maxCoeff()) {
      s.converged = true;
      s.feasible = s.q.sum() <= power_w;
      return s;
    }
  }
  return s;
}

// Downlink beamformer achieving SINR t on every user from converged dual
// powers: MMSE directions, then powers from (D / t - F) p = N0 1.
Precoder downlink_from_dual(const CMatrix& h, const CMatrix& gram, const Eigen::VectorXd& q, double t,
                            double n0) {
  const Eigen::Index k = h.rows();
  CMatrix b;
  coupling_gains(gram, q, n0, &b);
  CMatrix u = h.adjoint() * b;  // M x K
  for (Eigen::Index j = 0; j < k; ++j) {
    const double norm = u.col(j).norm();
    if (!(norm > 0.0)) throw NumericalError("maxmin: degenerate receive direction");
    u.col(j) /= norm;
  }
  const RMatrix gains = (h * u).cwiseAbs2();
  RMatrix system = -gains;
  for (Eigen::Index i = 0; i < k; ++i) system(i, i) = gains(i, i) / t;
  const Eigen::VectorXd p = system.partialPivLu().solve(Eigen::VectorXd::Constant(k, n0));
  if (!(p.minCoeff() >= 0.0)) throw NumericalError("maxmin: negative downlink power");
  CMatrix w = u * p.cwiseSqrt().cast<cdouble>().asDiagonal();
  const double power = w.squaredNorm();
  return {std::move(w), CsiMode::optimal, power};
}

}  // namespace

FeasibilityResult feasibility_check(const CMatrix& h_known, double t, double power_w,
                                    double noise_power_w, const MaxMinOptions& options) {
  require(t >= 0.0, "feasibility_check: t must be nonnegative");
  require(power_w > 0.0 && noise_power_w > 0.0, "feasibility_check: P and N0 must be positive");
  require(h_known.rows() > 0 && h_known.cols() > 0, "feasibility_check: empty channel");
  const CMatrix gram = h_known * h_known.adjoint();
  const DualState s = solve_dual(gram, t, power_w, noise_power_w, options.max_inner_iterations);
  FeasibilityResult r;
  r.dual_powers.assign(s.q.data(), s.q.data() + s.q.size());
  r.total_power = s.q.sum();
  r.iterations = s.iterations;
  r.feasible = s.feasible;
  if (t <= 0.0) {
    r.precoder = {CMatrix::Zero(h_known.cols(), h_known.rows()), CsiMode::optimal, 0.0};
    return r;
  }
  if (!s.feasible) {
    r.diagnostic = s.converged || s.q.sum() > power_w ? "dual power exceeds budget"
                                                     : "dual fixed point did not converge";
    return r;
  }
  r.precoder = downlink_from_dual(h_known, gram, s.q, t, noise_power_w);
  return r;
}

BeamformerSolution maxmin_beamforming(const CMatrix& h_known, double power_w, double noise_power_w,
                                      const MaxMinOptions& options) {
  require(options.tolerance > 0.0, "maxmin: tolerance must be positive");
  require(power_w > 0.0 && noise_power_w > 0.0, "maxmin: P and N0 must be positive");
  require(h_known.rows() > 0 && h_known.cols() > 0, "maxmin: empty channel");
  const Eigen::Index k = h_known.rows();
  const CMatrix gram = h_known * h_known.adjoint();
  // K > M is well posed with noise; only a user with no channel is degenerate.
  if (!(h_known.rowwise().squaredNorm().minCoeff() > 0.0)) {
    throw NumericalError("maxmin: a user has an all-zero channel");
  }
  const int cap = options.max_inner_iterations;
  const double inf = std::numeric_limits<double>::infinity();
  // q(t) is increasing in t, so the solution at the feasible end of the
  // bracket is a valid starting point for every larger target.
  Eigen::VectorXd q_lo = Eigen::VectorXd::Zero(k);
  auto try_target = [&](double t) {
    DualState s = solve_dual(gram, t, power_w, noise_power_w, cap, &q_lo);
    if (s.feasible) q_lo = s.q;
    return s.feasible;
  };

  double lo = 0.0;
  double hi = power_w * h_known.rowwise().squaredNorm().maxCoeff() / noise_power_w;
  for (int d = 0; try_target(hi); ++d) {
    if (d >= options.max_doublings) throw NumericalError("maxmin: upper bracket never became infeasible");
    lo = hi;
    hi *= 2.0;
  }
  BeamformerSolution sol;
  while (hi - lo > options.tolerance * hi) {
    if (sol.iterations >= options.max_bisections) {
      throw NumericalError("maxmin: bisection did not converge within the step cap");
    }
    const double mid = 0.5 * (lo + hi);
    (try_target(mid) ? lo : hi) = mid;
    ++sol.iterations;
  }
  if (!(lo > 0.0)) throw NumericalError("maxmin: no positive SINR is achievable");

  // Total dual power is continuous and increasing in t on the feasible side;
  // place t where it equals P.
  const Eigen::VectorXd q_start = q_lo;
  auto excess = [&](double t) {
    const DualState s = solve_dual(gram, t, inf, noise_power_w, cap, &q_start);
    if (!s.converged) return inf;
    return s.q.sum() / power_w - 1.0;
  };
  double t = lo;
  const double f_lo = excess(lo);
  const double f_hi = excess(hi);
  if (f_lo < 0.0 && f_hi > 0.0 && std::isfinite(f_hi)) {
    std::uintmax_t max_iter = 100;
    const auto root = boost::math::tools::toms748_solve(
        excess, lo, hi, f_lo, f_hi, boost::math::tools::eps_tolerance<double>(50), max_iter);
    t = root.first;
  }
  const DualState s = solve_dual(gram, t, inf, noise_power_w, cap, &q_start);
  if (!s.converged) throw NumericalError("maxmin: fixed point did not converge at the optimum");
  sol.precoder = downlink_from_dual(h_known, gram, s.q, t, noise_power_w);
  // Remove the residual of the root solve so the budget holds exactly.
  sol.precoder.w *= std::sqrt(power_w / sol.precoder.power_used);
  sol.precoder.power_used = sol.precoder.w.squaredNorm();
  sol.per_user_sinr = sinr_per_user(h_known, sol.precoder, noise_power_w);
  sol.t_star = *std::min_element(sol.per_user_sinr.begin(), sol.per_user_sinr.end());
  sol.converged = true;
  return sol;
}

}  // namespace hmimo
