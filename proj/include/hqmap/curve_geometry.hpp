#pragma once

#include <cstddef>
#include <functional>
#include <limits>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "hqmap/types.hpp"

namespace hqmap {

/// A closed curve z(theta), theta in [0, period), extended periodically.
/// Implementations must be pure and thread-safe.
class ParametricCurve {
 public:
  virtual ~ParametricCurve() = default;
  virtual double period() const = 0;
  virtual Complex point(double theta) const = 0;
  virtual Complex derivative(double theta) const = 0;
  /// Parameters in [0, period) where the derivative may be discontinuous.
  /// Quadrature panels are aligned with them.
  virtual std::vector<double> breaks() const { return {}; }
};

/// Arc-length parametrization g: [0, l) -> C of a positively oriented Jordan
/// curve, sampled at M uniform arclength nodes s_i = l*i/M.
///
/// The curve keeps its source parametrization, so g and g' can be evaluated
/// at any arclength, not only at the nodes. Instances are immutable.
class JordanCurve {
 public:
  std::size_t size() const { return samples_.size(); }
  double length() const { return length_; }
  double enclosed_area() const { return area_; }
  double spacing() const { return length_ / static_cast<double>(samples_.size()); }
  double node(std::size_t i) const { return spacing() * static_cast<double>(i); }

  std::span<const Complex> samples() const { return samples_; }
  std::span<const Complex> tangents() const { return tangents_; }

  /// g(s), periodic in s with period l.
  Complex point_at(double s) const;
  /// g'(s), a unit vector.
  Complex tangent_at(double s) const;

  /// Source parameter theta with S(theta) = s. Lifted: monotone in s over R.
  double parameter_at(double s) const;
  /// Arclength S(theta) from the source origin. Lifted: S(theta + T) = S(theta) + l.
  double arclength_at(double theta) const;
  /// |z'(theta)| of the source parametrization.
  double speed_at(double theta) const { return std::abs(source_->derivative(theta)); }

  const ParametricCurve& parametrization() const { return *source_; }
  std::shared_ptr<const ParametricCurve> parametrization_ptr() const { return source_; }

 private:
  friend JordanCurve arc_length_reparametrize(std::shared_ptr<const ParametricCurve>, std::size_t);

  double arclength_in_panel(std::size_t panel, double theta) const;

  std::shared_ptr<const ParametricCurve> source_;
  std::vector<double> panel_theta_;  // panel boundaries, 0 .. period
  std::vector<double> panel_cum_;    // S at panel boundaries
  std::vector<Complex> samples_;
  std::vector<Complex> tangents_;
  double length_ = 0.0;
  double area_ = 0.0;
};

/// Builds the uniform arclength sampling of a parametric curve.
/// Requires M >= 16. Clockwise sources are reversed so the result is positively
/// oriented. Throws InvalidCurveError if the sampled polygon self-intersects.
JordanCurve arc_length_reparametrize(std::shared_ptr<const ParametricCurve> source, std::size_t m);

/// Same, for a closed polyline of points. The points are joined by a periodic
/// cubic spline in cumulative chord length ("spline") or by straight segments
/// ("linear"). Throws InputError on fewer than 3 distinct points.
JordanCurve arc_length_reparametrize(std::span<const Complex> points, std::size_t m,
                                     bool linear = false);

/// Shorter distance along the curve between arclength positions s1 and s2.
double arc_distance(const JordanCurve& curve, double s1, double s2);

/// Max over sampled node pairs of d_gamma / chord. Throws InvalidCurveError when
/// a chord between distinct nodes falls below the numeric floor.
double chord_arc_constant(const JordanCurve& curve);

/// Result of a Dini integral evaluation.
struct DiniResult {
  double value = 0.0;
  bool is_dini = true;
  double error_estimate = 0.0;
  /// Ratio of the two finest dyadic contributions (decay rate of the tail).
  double tail_ratio = 0.0;
};

/// Modulus of continuity omega(t). Nondecreasing, omega(t) = omega(cap_at) for
/// t >= cap_at. Three kinds: power c*t^a, a user closed form, and an empirical
/// table on a t-grid. Between table points the next larger grid value is used
/// (an upper bound for a nondecreasing function); below the first grid point the
/// table is extended linearly to omega(0) = 0.
class ModulusOfContinuity {
 public:
  enum class Kind { power, closed_form, empirical };

  static ModulusOfContinuity power(double c, double a,
                                   double cap_at = std::numeric_limits<double>::infinity());
  static ModulusOfContinuity closed_form(std::function<double(double)> f, double cap_at,
                                         std::string label = "closed_form");
  /// Running maximum is applied to the values so the table is nondecreasing.
  static ModulusOfContinuity empirical(std::vector<double> t_grid, std::vector<double> values,
                                       double cap_at);

  double operator()(double t) const;
  Kind kind() const { return kind_; }
  double cap_at() const { return cap_at_; }
  /// omega(cap_at), the value for every t >= cap_at.
  double cap_value() const { return (*this)(cap_at_); }
  const std::string& label() const { return label_; }

  std::span<const double> grid() const { return grid_; }
  std::span<const double> table() const { return table_; }
  double power_coefficient() const { return c_; }
  double power_exponent() const { return a_; }
  /// Multiplier applied by scaled().
  double scale_factor() const { return scale_; }

  /// int_0^d omega(t) dt.
  double integral(double d) const;

  /// Returns c * omega.
  ModulusOfContinuity scaled(double c) const;

 private:
  ModulusOfContinuity() = default;
  double base(double t) const;

  Kind kind_ = Kind::power;
  double cap_at_ = std::numeric_limits<double>::infinity();
  double scale_ = 1.0;
  double c_ = 0.0;
  double a_ = 1.0;
  std::function<double(double)> fn_;
  std::vector<double> grid_;
  std::vector<double> table_;
  std::string label_;
};

/// omega(t) = sup over sampled |x - y| <= t of |xi(x) - xi(y)| for each t in
/// t_grid. Samples are spaced h apart; periodic samples wrap around.
/// Throws InputError on an empty grid.
ModulusOfContinuity modulus_of_continuity(std::span<const Complex> values, double spacing,
                                          bool periodic, std::span<const double> t_grid);

/// Empirical modulus of g' at every lag k*h, k = 1..M/2, capped at l.
ModulusOfContinuity tangent_modulus(const JordanCurve& curve);

/// int_0^delta omega(t)/t dt with a dyadic Cauchy test for divergence.
DiniResult dini_integral(const ModulusOfContinuity& omega, double delta);

/// True when consecutive edge cross products of the sampled curve never change
/// sign (up to a relative tolerance).
bool is_convex(const JordanCurve& curve);

/// min over the curve of |w - g(s)|, refined between nodes.
double distance_to_curve(const JordanCurve& curve, Complex w);

}  // namespace hqmap
