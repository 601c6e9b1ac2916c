#include "hqmap/curve_geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "hqmap/curve_spec.hpp"
#include "hqmap/errors.hpp"
#include "hqmap/parallel.hpp"
#include "hqmap/quadrature.hpp"

namespace hqmap {
namespace {

double cross(Complex a, Complex b) { return a.real() * b.imag() - a.imag() * b.real(); }

bool segments_cross(Complex a, Complex b, Complex c, Complex d) {
  const double d1 = cross(b - a, c - a);
  const double d2 = cross(b - a, d - a);
  const double d3 = cross(d - c, a - c);
  const double d4 = cross(d - c, b - c);
  return ((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) && ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0));
}

void check_simple(std::span<const Complex> z) {
  const std::size_t m = z.size();
  std::vector<char> hit(m, 0);
  parallel_for(m, [&](std::size_t i) {
    const Complex a = z[i];
    const Complex b = z[(i + 1) % m];
    for (std::size_t j = i + 2; j < m; ++j) {
      if (i == 0 && j == m - 1) continue;
      if (segments_cross(a, b, z[j], z[(j + 1) % m])) {
        hit[i] = 1;
        return;
      }
    }
  });
  if (std::any_of(hit.begin(), hit.end(), [](char h) { return h != 0; })) {
    throw InvalidCurveError("curve is self-intersecting");
  }
}

}  // namespace

double JordanCurve::arclength_in_panel(std::size_t panel, double theta) const {
  const double a = panel_theta_[panel];
  if (theta <= a) return 0.0;
  return quad::integrate([&](double t) { return std::abs(source_->derivative(t)); }, a, theta);
}

double JordanCurve::arclength_at(double theta) const {
  const double period = source_->period();
  const double k = std::floor(theta / period);
  double r = theta - k * period;
  if (r >= period) r = 0.0;
  auto it = std::upper_bound(panel_theta_.begin(), panel_theta_.end(), r);
  std::size_t p = static_cast<std::size_t>(it - panel_theta_.begin());
  p = p == 0 ? 0 : std::min(p - 1, panel_theta_.size() - 2);
  return panel_cum_[p] + arclength_in_panel(p, r) + k * length_;
}

double JordanCurve::parameter_at(double s) const {
  const double period = source_->period();
  const double k = std::floor(s / length_);
  double r = s - k * length_;
  if (r >= length_) r = 0.0;
  auto it = std::upper_bound(panel_cum_.begin(), panel_cum_.end(), r);
  std::size_t p = static_cast<std::size_t>(it - panel_cum_.begin());
  p = p == 0 ? 0 : std::min(p - 1, panel_cum_.size() - 2);
  double lo = panel_theta_[p];
  double hi = panel_theta_[p + 1];
  const double target = r - panel_cum_[p];
  const double span = panel_cum_[p + 1] - panel_cum_[p];
  double theta = span > 0.0 ? lo + (hi - lo) * target / span : lo;
  for (int iter = 0; iter < 100; ++iter) {
    const double f = arclength_in_panel(p, theta) - target;
    if (std::abs(f) <= 1e-15 * length_) break;
    if (f > 0.0) {
      hi = theta;
    } else {
      lo = theta;
    }
    const double speed = std::abs(source_->derivative(theta));
    double next = speed > 0.0 ? theta - f / speed : 0.5 * (lo + hi);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::abs(next - theta) <= 1e-16 * period) {
      theta = next;
      break;
    }
    theta = next;
  }
  return theta + k * period;
}

Complex JordanCurve::point_at(double s) const { return source_->point(parameter_at(s)); }

Complex JordanCurve::tangent_at(double s) const {
  const double theta = parameter_at(s);
  Complex d = source_->derivative(theta);
  if (std::abs(d) < 1e-13 * length_) {
    const double dt = 1e-6 * source_->period();
    d = source_->point(theta + dt) - source_->point(theta - dt);
  }
  return d / std::abs(d);
}

JordanCurve arc_length_reparametrize(std::shared_ptr<const ParametricCurve> source, std::size_t m) {
  if (m < 16) throw InputError("arc_length_reparametrize: need M >= 16 samples");
  if (!source) throw InputError("arc_length_reparametrize: null curve");
  const double period = source->period();
  if (!(period > 0.0)) throw InvalidCurveError("curve parameter period must be positive");

  JordanCurve c;
  c.source_ = source;
  const std::size_t panels = std::max<std::size_t>(256, 4 * m);
  std::vector<double> th(panels + 1);
  for (std::size_t i = 0; i <= panels; ++i) th[i] = period * static_cast<double>(i) / panels;
  for (double b : source->breaks()) {
    if (b > 0.0 && b < period) th.push_back(b);
  }
  std::sort(th.begin(), th.end());
  th.erase(std::unique(th.begin(), th.end(),
                       [&](double a, double b) { return std::abs(a - b) <= 1e-14 * period; }),
           th.end());
  th.back() = period;
  c.panel_theta_ = th;
  c.panel_cum_.assign(th.size(), 0.0);
  double area = 0.0;
  for (std::size_t p = 0; p + 1 < th.size(); ++p) {
    c.panel_cum_[p + 1] =
        c.panel_cum_[p] + quad::integrate([&](double t) { return std::abs(source->derivative(t)); }, th[p], th[p + 1]);
    area += 0.5 * quad::integrate(
                      [&](double t) { return cross(source->point(t), source->derivative(t)); }, th[p], th[p + 1]);
  }
  c.length_ = c.panel_cum_.back();
  if (!(c.length_ > 0.0) || !std::isfinite(c.length_)) throw InvalidCurveError("curve has zero length");
  if (std::abs(area) <= 1e-12 * c.length_ * c.length_) throw InvalidCurveError("curve encloses no area");
  if (area < 0.0) return arc_length_reparametrize(make_reversed(std::move(source)), m);
  c.area_ = area;

  c.samples_.resize(m);
  c.tangents_.resize(m);
  parallel_for(m, [&](std::size_t i) {
    const double s = c.length_ * static_cast<double>(i) / static_cast<double>(m);
    c.samples_[i] = c.point_at(s);
    c.tangents_[i] = c.tangent_at(s);
  });
  check_simple(c.samples_);
  return c;
}

JordanCurve arc_length_reparametrize(std::span<const Complex> points, std::size_t m, bool linear) {
  std::vector<Complex> cleaned;
  for (const auto& p : points) {
    if (cleaned.empty() || std::abs(p - cleaned.back()) > 0.0) cleaned.push_back(p);
  }
  while (cleaned.size() > 1 && std::abs(cleaned.front() - cleaned.back()) == 0.0) cleaned.pop_back();
  if (cleaned.size() < 3) throw InputError("arc_length_reparametrize: need at least 3 distinct points");
  check_simple(cleaned);
  return arc_length_reparametrize(linear ? make_polygon(cleaned) : make_spline(cleaned), m);
}

double arc_distance(const JordanCurve& curve, double s1, double s2) {
  const double l = curve.length();
  const double tol = 1e-12 * l;
  if (s1 < -tol || s2 < -tol || s1 > l + tol || s2 > l + tol) {
    throw InputError("arc_distance: arclength outside [0, l]");
  }
  const double d = std::abs(s1 - s2);
  return std::min(d, l - d);
}

double chord_arc_constant(const JordanCurve& curve) {
  const auto z = curve.samples();
  const std::size_t m = z.size();
  if (m < 16) throw InputError("chord_arc_constant: need >= 16 samples");
  const double h = curve.spacing();
  const double floor = 1e-12 * curve.length();
  std::vector<double> row(m, 1.0);
  std::vector<char> degenerate(m, 0);
  parallel_for(m, [&](std::size_t i) {
    double best = 1.0;
    for (std::size_t j = i + 1; j < m; ++j) {
      const std::size_t lag = std::min(j - i, m - (j - i));
      const double chord = std::abs(z[i] - z[j]);
      if (chord < floor) {
        degenerate[i] = 1;
        return;
      }
      best = std::max(best, h * static_cast<double>(lag) / chord);
    }
    row[i] = best;
  });
  if (std::any_of(degenerate.begin(), degenerate.end(), [](char d) { return d != 0; })) {
    throw InvalidCurveError("chord_arc_constant: distinct samples nearly coincide (self-touching curve)");
  }
  return *std::max_element(row.begin(), row.end());
}

// ---------------------------------------------------------------------------

ModulusOfContinuity ModulusOfContinuity::power(double c, double a, double cap_at) {
  if (!(c >= 0.0) || !(a > 0.0) || a > 1.0) throw InputError("power modulus: need c >= 0 and 0 < a <= 1");
  ModulusOfContinuity w;
  w.kind_ = Kind::power;
  w.c_ = c;
  w.a_ = a;
  w.cap_at_ = cap_at;
  w.label_ = "power";
  return w;
}

ModulusOfContinuity ModulusOfContinuity::closed_form(std::function<double(double)> f, double cap_at,
                                                     std::string label) {
  if (!f) throw InputError("closed-form modulus: empty function");
  ModulusOfContinuity w;
  w.kind_ = Kind::closed_form;
  w.fn_ = std::move(f);
  w.cap_at_ = cap_at;
  w.label_ = std::move(label);
  return w;
}

ModulusOfContinuity ModulusOfContinuity::empirical(std::vector<double> t_grid, std::vector<double> values,
                                                   double cap_at) {
  if (t_grid.empty() || t_grid.size() != values.size()) {
    throw InputError("empirical modulus: grid and values must be non-empty and of equal size");
  }
  for (std::size_t i = 0; i < t_grid.size(); ++i) {
    if (!(t_grid[i] > 0.0) || (i > 0 && !(t_grid[i] > t_grid[i - 1]))) {
      throw InputError("empirical modulus: grid must be positive and strictly increasing");
    }
  }
  for (std::size_t i = 1; i < values.size(); ++i) values[i] = std::max(values[i], values[i - 1]);
  ModulusOfContinuity w;
  w.kind_ = Kind::empirical;
  w.grid_ = std::move(t_grid);
  w.table_ = std::move(values);
  w.cap_at_ = cap_at;
  w.label_ = "empirical";
  return w;
}

double ModulusOfContinuity::base(double t) const {
  if (t <= 0.0) return 0.0;
  switch (kind_) {
    case Kind::power:
      return c_ * std::pow(t, a_);
    case Kind::closed_form:
      return fn_(t);
    case Kind::empirical: {
      if (t < grid_.front()) return table_.front() * t / grid_.front();
      auto it = std::lower_bound(grid_.begin(), grid_.end(), t * (1.0 - 1e-12));
      return it == grid_.end() ? table_.back() : table_[static_cast<std::size_t>(it - grid_.begin())];
    }
  }
  return 0.0;
}

double ModulusOfContinuity::operator()(double t) const { return scale_ * base(std::min(t, cap_at_)); }

namespace {

// int_0^e of the (uncapped) empirical step table.
double table_integral(std::span<const double> g, std::span<const double> w, double e) {
  if (e <= 0.0) return 0.0;
  if (e <= g[0]) return w[0] * e * e / (2.0 * g[0]);
  double sum = 0.5 * w[0] * g[0];
  for (std::size_t i = 1; i < g.size(); ++i) {
    if (g[i - 1] >= e) return sum;
    sum += w[i] * (std::min(e, g[i]) - g[i - 1]);
  }
  if (e > g.back()) sum += w.back() * (e - g.back());
  return sum;
}

// int_0^e of table(t)/t.
double table_dini(std::span<const double> g, std::span<const double> w, double e) {
  if (e <= 0.0) return 0.0;
  if (e <= g[0]) return w[0] * e / g[0];
  double sum = w[0];
  for (std::size_t i = 1; i < g.size(); ++i) {
    if (g[i - 1] >= e) return sum;
    sum += w[i] * std::log(std::min(e, g[i]) / g[i - 1]);
  }
  if (e > g.back()) sum += w.back() * std::log(e / g.back());
  return sum;
}

}  // namespace

double ModulusOfContinuity::integral(double d) const {
  if (d <= 0.0) return 0.0;
  const double e = std::min(d, cap_at_);
  double head = 0.0;
  switch (kind_) {
    case Kind::power:
      head = c_ * std::pow(e, a_ + 1.0) / (a_ + 1.0);
      break;
    case Kind::empirical:
      head = table_integral(grid_, table_, e);
      break;
    case Kind::closed_form:
      for (int k = 0; k < 60; ++k) {
        const double hi = e * std::ldexp(1.0, -k);
        head += quad::integrate(fn_, 0.5 * hi, hi);
      }
      break;
  }
  const double tail = d > e ? (d - e) * base(cap_at_) : 0.0;
  return scale_ * (head + tail);
}

ModulusOfContinuity ModulusOfContinuity::scaled(double c) const {
  if (!(c >= 0.0)) throw InputError("modulus scale must be nonnegative");
  ModulusOfContinuity w = *this;
  w.scale_ *= c;
  return w;
}

ModulusOfContinuity modulus_of_continuity(std::span<const Complex> values, double spacing, bool periodic,
                                          std::span<const double> t_grid) {
  if (t_grid.empty()) throw InputError("modulus_of_continuity: empty t-grid");
  if (values.size() < 2) throw InputError("modulus_of_continuity: need at least two samples");
  if (!(spacing > 0.0)) throw InputError("modulus_of_continuity: spacing must be positive");
  std::vector<double> grid(t_grid.begin(), t_grid.end());
  std::sort(grid.begin(), grid.end());
  if (!(grid.front() > 0.0)) throw InputError("modulus_of_continuity: t-grid must be positive");
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());

  const std::size_t n = values.size();
  const std::size_t max_lag = periodic ? n / 2 : n - 1;
  const auto lag_of = [&](double t) {
    const double k = std::floor(t / spacing * (1.0 + 1e-12));
    return static_cast<std::size_t>(std::min<double>(k, static_cast<double>(max_lag)));
  };
  const std::size_t needed = lag_of(grid.back());
  std::vector<double> per_lag(needed + 1, 0.0);
  parallel_for(needed, [&](std::size_t idx) {
    const std::size_t k = idx + 1;
    double best = 0.0;
    const std::size_t count = periodic ? n : n - k;
    for (std::size_t i = 0; i < count; ++i) best = std::max(best, std::abs(values[(i + k) % n] - values[i]));
    per_lag[k] = best;
  });
  for (std::size_t k = 1; k < per_lag.size(); ++k) per_lag[k] = std::max(per_lag[k], per_lag[k - 1]);
  std::vector<double> table(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) table[i] = per_lag[lag_of(grid[i])];
  const double cap_at = periodic ? spacing * static_cast<double>(n) : spacing * static_cast<double>(n - 1);
  return ModulusOfContinuity::empirical(std::move(grid), std::move(table), cap_at);
}

ModulusOfContinuity tangent_modulus(const JordanCurve& curve) {
  const std::size_t m = curve.size();
  std::vector<double> grid(m / 2);
  for (std::size_t k = 0; k < grid.size(); ++k) grid[k] = curve.spacing() * static_cast<double>(k + 1);
  return modulus_of_continuity(curve.tangents(), curve.spacing(), true, grid);
}

DiniResult dini_integral(const ModulusOfContinuity& omega, double delta) {
  if (!(delta > 0.0)) throw InputError("dini_integral: delta must be positive");
  DiniResult r;
  const double e = std::min(delta, omega.cap_at());
  const double tail = delta > e ? omega.cap_value() * std::log(delta / e) : 0.0;
  switch (omega.kind()) {
    case ModulusOfContinuity::Kind::power: {
      const double a = omega.power_exponent();
      r.value = omega(e) / a;
      r.tail_ratio = std::pow(2.0, -a);
      break;
    }
    case ModulusOfContinuity::Kind::empirical: {
      const auto g = omega.grid();
      const auto w = omega.table();
      r.value = omega.scale_factor() * table_dini(g, w, e);
      // Dyadic decay over the resolved scales only: a table that stops
      // decaying toward its finest scale has a jump (omega(0+) > 0).
      std::vector<double> pieces;
      for (int k = 0; e * std::ldexp(1.0, -k - 1) >= g.front() * (1.0 - 1e-12); ++k) {
        const double hi = e * std::ldexp(1.0, -k);
        pieces.push_back(table_dini(g, w, hi) - table_dini(g, w, 0.5 * hi));
      }
      if (pieces.size() >= 2 && pieces[pieces.size() - 2] > 0.0) {
        r.tail_ratio = pieces.back() / pieces[pieces.size() - 2];
        r.is_dini = r.tail_ratio < 0.9;
      }
      break;
    }
    case ModulusOfContinuity::Kind::closed_form: {
      constexpr int kLevels = 40;
      std::vector<double> pieces(kLevels);
      double sum = 0.0;
      for (int k = 0; k < kLevels; ++k) {
        const double hi = e * std::ldexp(1.0, -k);
        // t = e^u turns omega(t)/t dt into omega(e^u) du.
        pieces[k] = quad::integrate([&](double u) { return omega(std::exp(u)); }, std::log(0.5 * hi), std::log(hi));
        sum += pieces[k];
      }
      const double last = pieces[kLevels - 1];
      const double prev = pieces[kLevels - 2];
      double tail_est = 0.0;
      if (last > 0.0) {
        r.tail_ratio = prev > 0.0 ? last / prev : 1.0;
        tail_est = r.tail_ratio < 1.0 ? last * r.tail_ratio / (1.0 - r.tail_ratio)
                                      : std::numeric_limits<double>::infinity();
      }
      r.is_dini = tail_est <= 1e-3 * std::max(sum, 1e-300);
      r.value = r.is_dini ? sum + tail_est : sum;
      r.error_estimate = r.is_dini ? std::abs(tail_est) * 1e-2 + 1e-14 * sum : tail_est;
      break;
    }
  }
  r.value += tail;
  return r;
}

bool is_convex(const JordanCurve& curve) {
  const auto z = curve.samples();
  const std::size_t m = z.size();
  for (std::size_t i = 0; i < m; ++i) {
    const Complex e1 = z[(i + 1) % m] - z[i];
    const Complex e2 = z[(i + 2) % m] - z[(i + 1) % m];
    if (cross(e1, e2) < -1e-9 * std::abs(e1) * std::abs(e2)) return false;
  }
  return true;
}

double distance_to_curve(const JordanCurve& curve, Complex w) {
  const auto z = curve.samples();
  std::size_t best = 0;
  for (std::size_t i = 1; i < z.size(); ++i) {
    if (std::abs(z[i] - w) < std::abs(z[best] - w)) best = i;
  }
  // Golden-section refinement on [s - h, s + h].
  const double h = curve.spacing();
  double a = curve.node(best) - h;
  double b = curve.node(best) + h;
  const double ratio = 0.5 * (std::sqrt(5.0) - 1.0);
  double c = b - ratio * (b - a);
  double d = a + ratio * (b - a);
  double fc = std::abs(curve.point_at(c) - w);
  double fd = std::abs(curve.point_at(d) - w);
  for (int it = 0; it < 80 && b - a > 1e-14 * curve.length(); ++it) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - ratio * (b - a);
      fc = std::abs(curve.point_at(c) - w);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + ratio * (b - a);
      fd = std::abs(curve.point_at(d) - w);
    }
  }
  return std::min({std::abs(z[best] - w), fc, fd});
}

}  // namespace hqmap
