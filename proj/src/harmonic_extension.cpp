#include "hqmap/harmonic_extension.hpp"

#include <algorithm>
#include <cmath>

#include "hqmap/errors.hpp"
#include "hqmap/fourier.hpp"
#include "hqmap/parallel.hpp"

namespace hqmap {
namespace {

class TrigBoundary final : public BoundarySource {
 public:
  TrigBoundary(std::vector<TrigTerm> terms, std::size_t m) : terms_(std::move(terms)) {
    double signed_area = 0.0;
    for (const auto& [n, c] : terms_) signed_area += kPi * static_cast<double>(n) * std::norm(c);
    if (!(signed_area > 0.0)) {
      throw InputError("boundary correspondence must be orientation preserving (counterclockwise)");
    }
    target_ = std::make_shared<const JordanCurve>(arc_length_reparametrize(make_trig_curve(terms_), m));
  }
  Complex value(double t) const override {
    Complex z = 0.0;
    for (const auto& [n, c] : terms_) z += c * std::polar(1.0, static_cast<double>(n) * t);
    return z;
  }
  Complex derivative(double t) const override {
    Complex z = 0.0;
    for (const auto& [n, c] : terms_) {
      z += kI * static_cast<double>(n) * c * std::polar(1.0, static_cast<double>(n) * t);
    }
    return z;
  }
  double arclength(double t) const override { return target_->arclength_at(t); }
  std::shared_ptr<const JordanCurve> target() const override { return target_; }

 private:
  std::vector<TrigTerm> terms_;
  std::shared_ptr<const JordanCurve> target_;
};

class CurveBoundary final : public BoundarySource {
 public:
  CurveBoundary(std::shared_ptr<const JordanCurve> curve, Correspondence kind)
      : curve_(std::move(curve)), kind_(kind) {}
  Complex value(double t) const override {
    if (kind_ == Correspondence::identity) return curve_->point_at(scale_identity() * t);
    return curve_->parametrization().point(scale_native() * t);
  }
  Complex derivative(double t) const override {
    if (kind_ == Correspondence::identity) return scale_identity() * curve_->tangent_at(scale_identity() * t);
    return scale_native() * curve_->parametrization().derivative(scale_native() * t);
  }
  double arclength(double t) const override {
    if (kind_ == Correspondence::identity) return scale_identity() * t;
    return curve_->arclength_at(scale_native() * t);
  }
  std::shared_ptr<const JordanCurve> target() const override { return curve_; }

 private:
  double scale_identity() const { return curve_->length() / kTwoPi; }
  double scale_native() const { return curve_->parametrization().period() / kTwoPi; }
  std::shared_ptr<const JordanCurve> curve_;
  Correspondence kind_;
};

// Horner evaluation of p(z) and p'(z) for coefficients c[0..degree].
std::pair<Complex, Complex> horner(std::span<const Complex> c, std::size_t degree, Complex z) {
  Complex p = c[degree];
  Complex dp = 0.0;
  for (std::size_t n = degree; n-- > 0;) {
    dp = dp * z + p;
    p = p * z + c[n];
  }
  return {p, dp};
}

std::size_t effective_degree(std::span<const Complex> c, double floor) {
  std::size_t d = 0;
  for (std::size_t n = 0; n < c.size(); ++n) {
    if (std::abs(c[n]) > floor) d = n;
  }
  return d;
}

}  // namespace

std::shared_ptr<const BoundarySource> make_trig_boundary(std::vector<TrigTerm> terms, std::size_t target_samples) {
  if (terms.empty()) throw InputError("trig boundary: no coefficients");
  return std::make_shared<TrigBoundary>(std::move(terms), target_samples);
}

std::shared_ptr<const BoundarySource> make_sampled_boundary(std::span<const Complex> values,
                                                            std::size_t target_samples) {
  const std::size_t n = values.size();
  if (!is_power_of_two(n) || n < 4) throw InputError("sampled boundary: sample count must be a power of two");
  const auto c = fourier::coefficients(values);
  double cmax = 0.0;
  for (const auto& v : c) cmax = std::max(cmax, std::abs(v));
  std::vector<TrigTerm> terms;
  for (std::size_t k = 0; k < n; ++k) {
    if (std::abs(c[k]) <= 1e-16 * cmax) continue;
    if (k == n / 2) {
      terms.push_back({static_cast<long>(n / 2), 0.5 * c[k]});
      terms.push_back({-static_cast<long>(n / 2), 0.5 * c[k]});
    } else {
      terms.push_back({fourier::frequency(k, n), c[k]});
    }
  }
  return make_trig_boundary(std::move(terms), target_samples);
}

std::shared_ptr<const BoundarySource> make_curve_boundary(std::shared_ptr<const JordanCurve> curve,
                                                          Correspondence kind) {
  if (!curve) throw InputError("curve boundary: null curve");
  return std::make_shared<CurveBoundary>(std::move(curve), kind);
}

BoundaryMap::BoundaryMap(std::shared_ptr<const BoundarySource> source, std::size_t n)
    : source_(std::move(source)) {
  if (!source_) throw InputError("BoundaryMap: null source");
  if (n < 4) throw InputError("BoundaryMap: need at least 4 samples");
  target_ = source_->target();
  values_.resize(n);
  derivatives_.resize(n);
  correspondence_.resize(n);
  parallel_for(n, [&](std::size_t j) {
    const double t = angle(j);
    values_[j] = source_->value(t);
    derivatives_[j] = source_->derivative(t);
    correspondence_[j] = source_->arclength(t);
  });
}

double BoundaryMap::max_speed() const {
  double m = 0.0;
  for (const auto& d : derivatives_) m = std::max(m, std::abs(d));
  return m;
}

HarmonicMap analyze(const BoundaryMap& boundary) {
  const std::size_t n = boundary.size();
  if (!is_power_of_two(n) || n < 64) {
    throw InputError("analyze: N must be a power of two >= 64, got " + std::to_string(n));
  }
  const auto c = fourier::coefficients(boundary.values());
  HarmonicMap map(boundary);
  const std::size_t half = n / 2;
  map.a_.assign(half + 1, 0.0);
  map.b_.assign(half + 1, 0.0);
  for (std::size_t k = 0; k < half; ++k) map.a_[k] = c[k];
  for (std::size_t k = 1; k < half; ++k) map.b_[k] = std::conj(c[n - k]);
  map.a_[half] = 0.5 * c[half];
  map.b_[half] = std::conj(0.5 * c[half]);

  double total = 0.0;
  double tail = 0.0;
  double cmax = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double e = std::norm(c[k]);
    total += e;
    if (std::abs(fourier::frequency(k, n)) > static_cast<long>(n / 4) || k == half) tail += e;
    cmax = std::max(cmax, std::abs(c[k]));
  }
  map.tail_energy_ = total > 0.0 ? tail / total : 0.0;
  map.degree_a_ = effective_degree(map.a_, 1e-17 * cmax);
  map.degree_b_ = effective_degree(map.b_, 1e-17 * cmax);
  return map;
}

HarmonicValue HarmonicMap::evaluate(Complex z) const {
  if (std::abs(z) > 1.0 + 1e-12) throw DomainError("harmonic map evaluated outside the closed unit disk");
  const auto [g, dg] = horner(a_, degree_a_, z);
  const auto [h, dh] = horner(b_, degree_b_, z);
  return {g + std::conj(h), dg, std::conj(dh)};
}

PoissonResult poisson_quadrature(const BoundaryMap& boundary, Complex z) {
  const double r = std::abs(z);
  if (r >= 1.0) throw DomainError("poisson_quadrature: point must lie in the open unit disk");
  const std::size_t n = boundary.size();
  const double phi = std::arg(z);
  const auto values = boundary.values();
  Complex sum = 0.0;
  double vmax = 0.0;
  const double dx = kTwoPi / static_cast<double>(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double x = boundary.angle(j);
    const double kernel = (1.0 - r * r) / (kTwoPi * (1.0 - 2.0 * r * std::cos(x - phi) + r * r));
    sum += kernel * values[j];
    vmax = std::max(vmax, std::abs(values[j]));
  }
  PoissonResult out;
  out.value = sum * dx;
  const double rn = std::pow(r, static_cast<double>(n));
  out.error_bound = 2.0 * vmax * rn / (1.0 - rn);
  out.near_boundary = r > 1.0 - 10.0 / static_cast<double>(n);
  return out;
}

RadialTangential radial_tangential(const HarmonicMap& map, Complex z) {
  const auto v = map.evaluate(z);
  RadialTangential out;
  const double r = std::abs(z);
  out.at_origin = r == 0.0;
  const Complex dir = out.at_origin ? Complex(1.0, 0.0) : z / r;
  // g' = f_z and conj(h') = f_zbar.
  out.radial = dir * v.fz + std::conj(dir) * v.fzbar;
  out.tangential = kI * (z * v.fz - std::conj(z) * v.fzbar);
  return out;
}

}  // namespace hqmap
