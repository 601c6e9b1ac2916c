#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <vector>

#include "hqmap/curve_geometry.hpp"
#include "hqmap/curve_spec.hpp"
#include "hqmap/types.hpp"

namespace hqmap {

/// Continuous description of a boundary correspondence Psi(t) = F(e^{it}) onto
/// a target Jordan curve, with the induced arclength parameter psi(t) (lifted,
/// psi(t + 2pi) = psi(t) + l).
class BoundarySource {
 public:
  virtual ~BoundarySource() = default;
  virtual Complex value(double t) const = 0;
  virtual Complex derivative(double t) const = 0;
  virtual double arclength(double t) const = 0;
  virtual std::shared_ptr<const JordanCurve> target() const = 0;
};

/// Psi(t) = sum_n c_n e^{int}. The target is the curve Psi traces, so psi is
/// its own arclength function. Throws InputError for clockwise data.
std::shared_ptr<const BoundarySource> make_trig_boundary(std::vector<TrigTerm> terms,
                                                         std::size_t target_samples = 1024);

/// Trigonometric interpolant of N uniform samples (N a power of two).
std::shared_ptr<const BoundarySource> make_sampled_boundary(std::span<const Complex> values,
                                                            std::size_t target_samples = 1024);

/// Boundary correspondence onto a given curve. "identity" is the arclength-
/// proportional map psi(t) = l*t/(2pi); "native" follows the curve's own
/// parametrization rescaled to [0, 2pi).
enum class Correspondence { identity, native };
std::shared_ptr<const BoundarySource> make_curve_boundary(std::shared_ptr<const JordanCurve> curve,
                                                          Correspondence kind);

/// N uniform samples t_j = 2pi j/N of a boundary correspondence, together with
/// the continuous source they came from.
class BoundaryMap {
 public:
  BoundaryMap(std::shared_ptr<const BoundarySource> source, std::size_t n);

  std::size_t size() const { return values_.size(); }
  double angle(std::size_t j) const { return kTwoPi * static_cast<double>(j) / static_cast<double>(size()); }

  std::span<const Complex> values() const { return values_; }
  std::span<const Complex> derivatives() const { return derivatives_; }
  /// psi(t_j) in [0, l) on the first period (lifted from psi(0)).
  std::span<const double> correspondence() const { return correspondence_; }

  const JordanCurve& target() const { return *target_; }
  std::shared_ptr<const JordanCurve> target_ptr() const { return target_; }
  const BoundarySource& source() const { return *source_; }
  std::shared_ptr<const BoundarySource> source_ptr() const { return source_; }

  Complex value_at(double t) const { return source_->value(t); }
  Complex derivative_at(double t) const { return source_->derivative(t); }
  double arclength_at(double t) const { return source_->arclength(t); }
  /// psi'(t) = |Psi'(t)|.
  double speed_at(double t) const { return std::abs(source_->derivative(t)); }

  /// max_j |Psi'(t_j)|.
  double max_speed() const;

 private:
  std::shared_ptr<const BoundarySource> source_;
  std::shared_ptr<const JordanCurve> target_;
  std::vector<Complex> values_;
  std::vector<Complex> derivatives_;
  std::vector<double> correspondence_;
};

/// Value of f = g + conj(h) with its Wirtinger derivatives f_z = g', f_zbar = conj(h').
struct HarmonicValue {
  Complex value;
  Complex fz;
  Complex fzbar;

  double jacobian() const { return std::norm(fz) - std::norm(fzbar); }
  /// Operator norm |Df| = |f_z| + |f_zbar|.
  double norm() const { return std::abs(fz) + std::abs(fzbar); }
};

/// Harmonic extension f = P[F] stored as g(z) = sum a_n z^n and
/// h(z) = sum_{n>=1} b_n z^n. Immutable; evaluation is pure.
class HarmonicMap {
 public:
  /// a_n for n = 0..N/2.
  std::span<const Complex> analytic() const { return a_; }
  /// b_n for n = 0..N/2 (b_0 is always 0).
  std::span<const Complex> coanalytic() const { return b_; }
  const BoundaryMap& boundary() const { return boundary_; }

  /// Fraction of spectral energy at |n| > N/4.
  double tail_energy() const { return tail_energy_; }
  bool resolved() const { return tail_energy_ < 1e-12; }

  /// f(z), f_z, f_zbar for |z| <= 1. Throws DomainError outside the closed disk.
  HarmonicValue evaluate(Complex z) const;
  Complex operator()(Complex z) const { return evaluate(z).value; }

 private:
  friend HarmonicMap analyze(const BoundaryMap& boundary);
  explicit HarmonicMap(BoundaryMap boundary) : boundary_(std::move(boundary)) {}

  BoundaryMap boundary_;
  std::vector<Complex> a_;
  std::vector<Complex> b_;
  std::size_t degree_a_ = 0;
  std::size_t degree_b_ = 0;
  double tail_energy_ = 0.0;
};

/// Splits the sampled boundary spectrum c_n into a_n = c_n (n >= 0) and
/// b_n = conj(c_{-n}) (n >= 1); the Nyquist mode is shared equally.
/// Throws InputError unless N is a power of two >= 64.
HarmonicMap analyze(const BoundaryMap& boundary);

struct PoissonResult {
  Complex value;
  /// Bound on the trapezoid aliasing error, 2 max|Psi| r^N / (1 - r^N).
  double error_bound = 0.0;
  /// Set when |z| > 1 - 10/N (kernel peaks are under-resolved).
  bool near_boundary = false;
};

/// Direct trapezoid quadrature of the Poisson integral at an interior point.
PoissonResult poisson_quadrature(const BoundaryMap& boundary, Complex z);

struct RadialTangential {
  Complex radial;      // d/dr f(re^{it})
  Complex tangential;  // d/dt f(re^{it})
  bool at_origin = false;
};

/// d_r f = e^{it} g' + conj(e^{it} h'), d_t f = i(z g' - conj(z h')).
/// At z = 0 the direction t = 0 is used and at_origin is set.
RadialTangential radial_tangential(const HarmonicMap& map, Complex z);

}  // namespace hqmap
