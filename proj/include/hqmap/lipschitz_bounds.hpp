#pragma once

#include <cmath>
#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "hqmap/curve_geometry.hpp"
#include "hqmap/harmonic_extension.hpp"

namespace hqmap {

struct MoriBound {
  double K = 1.0;
  double B_gamma = 1.0;
  double area = 0.0;
  double alpha = 0.0;   // 2 / (K (1 + 2B)^2)
  double Lambda = 0.0;  // 4 2^alpha (1 + 2B) sqrt(2 pi K |Omega| / log 2)

  /// |w1 - w2| <= Lambda |z1 - z2|^alpha.
  bool holds(Complex z1, Complex z2, Complex w1, Complex w2) const;
};

/// Throws InputError for K < 1, B < 1 or a nonpositive area.
MoriBound mori_holder(double K, double B_gamma, double area);

/// A(x) = c x^p exactly on (0, x0].
struct PowerTail {
  double c = 0.0;
  double p = 0.0;
  double x0 = 0.0;
};

/// Nonnegative function on (0, B] with its primitive and first moment.
class IntegrableFunction {
 public:
  virtual ~IntegrableFunction() = default;
  virtual double value(double x) const = 0;
  /// int_0^x A.
  virtual double cumulative(double x) const = 0;
  /// (int_a^b A, int_a^b x A).
  virtual std::pair<double, double> moments(double a, double b) const = 0;
  /// False when int_0^b A diverges.
  virtual bool integrable(double b) const = 0;
  virtual std::optional<PowerTail> tail() const { return std::nullopt; }
  virtual std::string describe() const = 0;
};

std::shared_ptr<const IntegrableFunction> constant_function(double c);
/// sum_i c_i x^{p_i} with c_i >= 0 and p_i > -1 (InputError otherwise).
std::shared_ptr<const IntegrableFunction> power_mixture(std::vector<std::pair<double, double>> terms);
/// A(y) = omega(y) / y, with omega capped beyond its cap_at.
std::shared_ptr<const IntegrableFunction> dini_integrand(ModulusOfContinuity omega);
/// "const:C" or "power:c@p,c@p,...".
std::shared_ptr<const IntegrableFunction> integrable_from_string(const std::string& text);

/// The increasing function chi with x chi(x) convex and
/// int_0^B A(x) chi(Q x^-q) dx <= 4 int_0^B A.
///
/// Breakpoints x_0 = B > x_1 > ... with int_0^{x_k} A <= M 2^-k, each x_{k+1}
/// the largest admissible value below x_k/2 (1 - 1e-12). xi is piecewise
/// linear with xi(x_k) = k and xi = 0 on [B, inf), and chi(x) = xi((Q/x)^{1/q}).
/// For q < 1 that x chi(x) is concave between breakpoints, so chi is replaced by
/// G(x)/x with G the greatest convex minorant of x xi((Q/x)^{1/q}); then
/// chi(Q x^-q) <= xi(x). Breakpoints are kept as logarithms; Q is given by log Q.
class ConvexMajorant {
 public:
  double B() const { return b_; }
  double q() const { return q_; }
  double tau() const { return 1.0 / q_; }
  double log_Q() const { return log_q_; }
  double mass() const { return mass_; }
  std::size_t depth() const { return log_x_.size() - 1; }
  std::span<const double> log_breakpoints() const { return log_x_; }
  double breakpoint(std::size_t k) const { return std::exp(log_x_[k]); }
  /// Breakpoints above the smallest positive double, and those found by root
  /// finding (the rest follow the exact power law of A near 0).
  std::size_t numeric_count() const { return numeric_count_; }

  double xi(double x) const;
  double xi_from_log(double log_x) const;
  /// Inverse of xi on (0, depth]: log of the x with xi(x) = v.
  double log_xi_inverse(double v) const;
  double xi_inverse(double v) const { return std::exp(log_xi_inverse(v)); }
  double chi(double x) const;
  /// chi at x = e^{log_x}, for arguments outside the double range.
  double chi_from_log(double log_x) const;
  /// log chi^{-1}(v) = log Q - q log xi^{-1}(v). Throws RangeError beyond depth.
  double log_chi_inverse(double v) const;
  double chi_inverse(double v) const { return std::exp(log_chi_inverse(v)); }

  /// int_0^B A xi over the stored segments, and a bound on what lies below the
  /// last numeric breakpoint.
  /// For q < 1 this bounds int A chi(Q x^-q) from above.
  double integral_A_xi() const { return integral_; }
  double integral_tail_bound() const { return tail_bound_; }
  /// (int A xi) / (int A).
  double ratio() const { return mass_ > 0.0 ? integral_ / mass_ : 0.0; }

  struct ConvexityCheck {
    std::size_t points = 0;
    double worst_excess = 0.0;  // max of g(mid) - (g(a) + g(b))/2, relative
    bool pass = false;
  };
  /// Midpoint test of x chi(x) on a log grid over the range where chi > 0 and
  /// the values are finite.
  ConvexityCheck convexity_check(std::size_t points = 200) const;

 private:
  friend ConvexMajorant eremenko_majorant(std::shared_ptr<const IntegrableFunction>, double, double, double,
                                          std::size_t);
  double hull_position(std::size_t k) const;
  double hull_slope(std::size_t i, std::size_t j) const;

  std::shared_ptr<const IntegrableFunction> a_;
  double b_ = 1.0;
  double q_ = 1.0;
  double log_q_ = 0.0;
  double mass_ = 0.0;
  std::vector<double> log_x_;
  std::size_t numeric_count_ = 0;
  double integral_ = 0.0;
  double tail_bound_ = 0.0;
  std::vector<std::size_t> hull_;  // breakpoint indices on the minorant, q < 1 only
};

/// Builds `depth` breakpoints below x_0 = B. Throws InputError when A is not
/// integrable or q, Q, B are not positive, and RangeError (with the deepest
/// valid k) when a breakpoint underflows and A has no exact power tail.
ConvexMajorant eremenko_majorant(std::shared_ptr<const IntegrableFunction> A, double B, double q, double log_Q,
                                 std::size_t depth = 64);

struct UpsilonResult {
  double upsilon = 0.0;
  /// The same expression with the extra 1/(B_gamma Lambda) factor of the
  /// printed formula, kept for audit.
  double upsilon_literal = 0.0;
  double B = 0.0;
  double log_Q = 0.0;
  double log_Q_literal = 0.0;
  double C1 = 0.0;
  double dini = 0.0;
  double dini_error = 0.0;
};

/// Upsilon = 8 K C1 B_gamma / alpha * int_0^B omega(y)/y dy with B = B_gamma
/// Lambda pi^alpha and Q = omega(l) (B_gamma Lambda)^{2/alpha}, C1 = pi/4.
/// Throws CertificateUnavailable when omega is not Dini.
UpsilonResult upsilon(double K, const JordanCurve& curve, const ModulusOfContinuity& omega, const MoriBound& mori);

struct LipschitzCertificate {
  double K = 1.0;
  double B_gamma = 1.0;
  double area = 0.0;
  double length = 0.0;
  double alpha = 0.0;
  double Lambda = 0.0;
  double B = 0.0;
  double q = 0.0;
  double log_Q = 0.0;
  double Upsilon = 0.0;
  double Upsilon_literal = 0.0;
  double C1 = 0.0;
  /// log10 of (pi^2/2) K chi^{-1}(Upsilon); L_bound is infinite when it overflows.
  double L_bound_log10 = 0.0;
  double L_bound = 0.0;
  /// log10 of K L_bound, the Lipschitz constant of f.
  double f_bound_log10 = 0.0;
  std::size_t x_k_count = 0;
  std::size_t x_k_numeric = 0;
  double dini_error = 0.0;
  double majorant_tail = 0.0;
};

LipschitzCertificate lipschitz_certificate(double K, const JordanCurve& curve, const ModulusOfContinuity& omega);

/// True when log10(K L_bound) >= log10(value), i.e. the certificate covers value.
bool certificate_covers(const LipschitzCertificate& cert, double value);

struct JensenCheck {
  double M = 0.0;        // max |Psi'| / (2 pi K C1)
  double lhs = 0.0;      // Phi(M)
  double rhs = 0.0;      // average of Phi(M(x, phi))
  bool pass = false;
};

/// Phi(M) <= (1/2pi) int Phi(M(x,phi)) dx with Phi(t) = t chi(t), at the angle
/// where |Psi'| is largest. Diagnostic only.
JensenCheck jensen_check(const BoundaryMap& boundary, const ModulusOfContinuity& omega, const ConvexMajorant& chi,
                         double K);

}  // namespace hqmap
