#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "hqmap/curve_geometry.hpp"
#include "hqmap/types.hpp"

namespace hqmap {

/// N uniform samples of a 2pi-periodic function, N a power of two.
class CircleFunction {
 public:
  explicit CircleFunction(std::vector<Complex> samples);

  std::size_t size() const { return samples_.size(); }
  std::span<const Complex> samples() const { return samples_; }
  const Complex& operator[](std::size_t j) const { return samples_[j]; }
  double angle(std::size_t j) const { return kTwoPi * static_cast<double>(j) / static_cast<double>(size()); }
  Complex mean() const;

 private:
  std::vector<Complex> samples_;
};

struct PvResult {
  CircleFunction values;
  /// max |I_h - I_2h| / 3 over the grid, a Richardson-style estimate of the
  /// quadrature error near the singularity.
  double error_estimate = 0.0;
};

/// H(chi)(tau) = -(1/pi) int_0^pi [chi(tau+t) - chi(tau-t)] / (2 tan(t/2)) dt,
/// by the midpoint rule on panels of width 2h whose midpoints are the odd
/// grid points, so the singular endpoint is never sampled. Requires N >= 128.
PvResult hilbert_pv(const CircleFunction& fn);

/// Multiplier form c_n -> -i sgn(n) c_n, c_0 -> 0 (Nyquist mode also -> 0).
CircleFunction hilbert_spectral(const CircleFunction& fn);

/// Max |P[H chi](z) - conj_harmonic(P[chi])(z)| over r in {0.3, 0.6, 0.9} and
/// 64 angles. The left side is the Poisson quadrature of the spectral
/// transform; the right side is Im of the analytic completion of each real
/// component, evaluated by Horner.
double conjugate_identity_check(const CircleFunction& boundary);

struct PrivalovReport {
  std::vector<double> h;      // dyadic steps
  std::vector<double> lhs;    // max_x |H(x+h) - H(x)|
  std::vector<double> term_a; // int_0^{2h} omega(t)/t dt
  std::vector<double> term_b; // h int_h^{2pi} omega(t)/t^2 dt
  std::vector<double> term_c; // omega(h)
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;
  bool pass = false;
};

/// Fits the smallest nonnegative (A, B, C), minimizing A + B + C, with
/// lhs(h) <= A*term_a + B*term_b + C*term_c for h = 2pi*2^-j, j = 1..levels.
/// Throws PreconditionError when |fn(x) - fn(y)| <= omega(|x-y|) fails on the
/// sampled pairs, or when N < 4 * 2^levels.
PrivalovReport privalov_report(const CircleFunction& fn_derivative, const ModulusOfContinuity& omega,
                               int levels = 8);

}  // namespace hqmap
