#pragma once

#include <cstddef>
#include <optional>

#include "hqmap/curve_geometry.hpp"
#include "hqmap/harmonic_extension.hpp"

namespace hqmap {

/// K(s,t) = Re[conj(g(t) - g(s)) * i g'(s)] on the arclength parametrization.
double kernel_K(const JordanCurve& curve, double s, double t);

/// K_F(t,tau) = Re[conj(Psi(t) - Psi(tau)) * i Psi'(tau)]. Equals
/// psi'(tau) * K(psi(tau), psi(t)).
double kernel_KF(const BoundaryMap& boundary, double t, double tau);

/// The pullback route psi'(tau) * K(psi(tau), psi(t)).
double kernel_KF_pullback(const BoundaryMap& boundary, double t, double tau);

struct KernelEvaluation {
  double first = 0.0;
  double second = 0.0;
  double value = 0.0;
  double bound = 0.0;
  double weight = 0.0;  // 2 sin^2((t - tau)/2), or 0 for arclength pairs
};

struct KernelBoundReport {
  std::size_t pairs = 0;
  double max_excess = 0.0;  // max(value - bound), <= 0 when the bound holds
  KernelEvaluation worst;
  bool pass = false;

  /// Pullback form |K_F(x,phi)| <= psi'(phi) W(d_gamma), when a boundary was given.
  bool pullback_checked = false;
  std::size_t pullback_pairs = 0;
  double pullback_max_excess = 0.0;
  KernelEvaluation pullback_worst;
  bool pullback_pass = true;
};

/// Checks |K(s,t)| <= W(d) = int_0^d omega, d the arc distance, on all node
/// pairs of the curve; with a boundary map, also checks the pullback form on
/// all pairs of its sample angles. A violation is reported, never thrown.
KernelBoundReport kernel_bound_check(const JordanCurve& curve, const ModulusOfContinuity& omega,
                                     const BoundaryMap* boundary = nullptr, double slack = 1e-3);

struct BoundaryJacobian {
  double value = 0.0;
  /// Bound on the contribution of the two panels touching t = tau.
  double remainder_bound = 0.0;
};

/// J_f(e^{i tau}) = (1/2pi) int K_F(t,tau) / (2 sin^2((t-tau)/2)) dt by the
/// midpoint rule on t = tau + (j + 1/2) 2pi/N, N = boundary.size(). The
/// remainder bound uses omega (the tangent modulus of the target by default).
/// Throws PreconditionError if max |Psi'| is not finite.
BoundaryJacobian boundary_jacobian(const BoundaryMap& boundary, double tau,
                                   const std::optional<ModulusOfContinuity>& omega = std::nullopt);

struct JacobianUpperBound {
  double value = 0.0;
  /// Bound on the part of the integral over |x| < x_min left out of the quadrature.
  double tail_bound = 0.0;
};

/// (pi/4) |Psi'(phi)| int_{-pi}^{pi} x^{-2} W(rho(x)) dx with rho(x) the arc
/// distance between Psi(phi + x) and Psi(phi), taken from the arclength
/// correspondence.
JacobianUpperBound jacobian_upper_bound(const BoundaryMap& boundary, const ModulusOfContinuity& omega,
                                        double phi);

}  // namespace hqmap
