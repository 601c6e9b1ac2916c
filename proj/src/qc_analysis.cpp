#include "hqmap/qc_analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <tuple>

#include "hqmap/errors.hpp"
#include "hqmap/hilbert_transform.hpp"
#include "hqmap/parallel.hpp"

namespace hqmap {

Complex PolarGrid::point(std::size_t i) const {
  const double r = radii[i / angles];
  const double phi = kTwoPi * static_cast<double>(i % angles) / static_cast<double>(angles);
  return std::polar(r, phi);
}

PolarGrid boundary_approaching_grid(int levels, std::size_t angles) {
  PolarGrid g;
  g.angles = angles;
  g.radii.push_back(0.0);
  for (int j = 1; j <= levels; ++j) g.radii.push_back(1.0 - std::ldexp(1.0, -j));
  g.radii.push_back(1.0);
  return g;
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

GridSample sample_at(const HarmonicMap& map, Complex z) {
  const auto v = map.evaluate(z);
  GridSample s;
  s.z = z;
  const double a = std::abs(v.fz);
  const double b = std::abs(v.fzbar);
  s.k = a > 0.0 ? b / a : (b > 0.0 ? kInf : 0.0);
  s.jacobian = v.jacobian();
  s.norm = v.norm();
  s.tangential = std::abs(kI * (z * v.fz - std::conj(z) * v.fzbar));
  return s;
}

std::vector<GridSample> sample_grid(const HarmonicMap& map, const PolarGrid& grid) {
  std::vector<GridSample> out(grid.size());
  parallel_for(out.size(), [&](std::size_t i) { out[i] = sample_at(map, grid.point(i)); });
  return out;
}

double max_distortion_excess(const std::vector<GridSample>& samples, double K) {
  double worst = -kInf;
  for (const auto& s : samples) {
    const double n2 = s.norm * s.norm;
    worst = std::max(worst, (n2 - K * s.jacobian) / std::max(n2, 1e-300));
  }
  return worst;
}

void require_convex(const BoundaryMap& boundary, const char* who) {
  if (!is_convex(boundary.target())) throw PreconditionError(std::string(who) + ": target curve is not convex");
}

double rightmost_arclength(const JordanCurve& curve) {
  const auto z = curve.samples();
  std::size_t best = 0;
  for (std::size_t i = 1; i < z.size(); ++i) {
    if (z[i].real() > z[best].real()) best = i;
  }
  double lo = curve.node(best) - curve.spacing();
  double hi = curve.node(best) + curve.spacing();
  const double g = 0.5 * (std::sqrt(5.0) - 1.0);
  for (int it = 0; it < 100; ++it) {
    const double m1 = hi - g * (hi - lo);
    const double m2 = lo + g * (hi - lo);
    if (curve.point_at(m1).real() >= curve.point_at(m2).real()) {
      hi = m2;
    } else {
      lo = m1;
    }
  }
  const double s = std::fmod(0.5 * (lo + hi), curve.length());
  return s < 0.0 ? s + curve.length() : s;
}

double periodic_distance(double a, double b, double period) {
  const double d = std::fmod(std::abs(a - b), period);
  return std::min(d, period - d);
}

// Precomposition of a boundary source with the disk automorphism
// M(z) = e^{i alpha} (z - a) / (1 - conj(a) z), through the lifted boundary angle
// theta(t) = t0 + t + 2 arg(1 - a e^{-it}) - 2 arg(1 - a).
class MobiusComposed final : public BoundarySource {
 public:
  MobiusComposed(std::shared_ptr<const BoundarySource> inner, Complex a, double t0)
      : inner_(std::move(inner)), a_(a), shift_(t0 - 2.0 * std::arg(1.0 - a)) {}
  Complex value(double t) const override { return inner_->value(theta(t)); }
  Complex derivative(double t) const override { return inner_->derivative(theta(t)) * theta_prime(t); }
  double arclength(double t) const override { return inner_->arclength(theta(t)); }
  std::shared_ptr<const JordanCurve> target() const override { return inner_->target(); }

 private:
  double theta(double t) const { return shift_ + t + 2.0 * std::arg(1.0 - a_ * std::polar(1.0, -t)); }
  double theta_prime(double t) const {
    const Complex e = a_ * std::polar(1.0, -t);
    return 1.0 + 2.0 * (kI * e / (1.0 - e)).imag();
  }
  std::shared_ptr<const BoundarySource> inner_;
  Complex a_;
  double shift_;
};

// Lifted t with psi(t) = target, psi increasing.
double invert_correspondence(const BoundaryMap& boundary, double target, double lo, double hi) {
  for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (boundary.arclength_at(mid) < target) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace

DilatationReport dilatation_field(const HarmonicMap& map, const PolarGrid& grid, std::optional<double> user_K,
                                  double tol) {
  if (grid.size() == 0) throw InputError("dilatation_field: empty grid");
  DilatationReport rep;
  rep.samples = sample_grid(map, grid);
  rep.J_min = kInf;
  rep.k_sup = -1.0;
  for (const auto& s : rep.samples) {
    if (s.k > rep.k_sup) {
      rep.k_sup = s.k;
      rep.k_argmax = s.z;
    }
    rep.J_min = std::min(rep.J_min, s.jacobian);
    rep.tangential_max = std::max(rep.tangential_max, s.tangential);
    rep.norm_max = std::max(rep.norm_max, s.norm);
  }
  rep.sense_preserving = rep.J_min > 0.0;
  rep.quasiconformal = rep.k_sup < 1.0 - tol;
  rep.K = rep.quasiconformal ? (1.0 + rep.k_sup) / (1.0 - rep.k_sup) : kInf;
  if (rep.quasiconformal) {
    rep.distortion_excess = max_distortion_excess(rep.samples, rep.K);
    rep.distortion_holds = rep.distortion_excess <= 1e-9;
  } else {
    rep.distortion_excess = kInf;
    rep.distortion_holds = false;
  }
  if (user_K) {
    if (*user_K < 1.0) throw InputError("dilatation_field: K must be >= 1");
    rep.user_K = user_K;
    rep.user_K_holds = max_distortion_excess(rep.samples, *user_K) <= 1e-9;
  }
  return rep;
}

NormalizationReport normalization_check(const HarmonicMap& map, std::optional<double> anchor_arclength, double tol) {
  const auto& boundary = map.boundary();
  const auto& curve = boundary.target();
  const double l = curve.length();
  const double s0 = anchor_arclength ? *anchor_arclength : rightmost_arclength(curve);
  NormalizationReport rep;
  std::array<double, 4> psi{};
  for (int k = 0; k < 3; ++k) {
    const double t = kTwoPi * k / 3.0;
    rep.points[k] = boundary.value_at(t);
    rep.anchors[k] = curve.point_at(s0 + k * l / 3.0);
    psi[k] = boundary.arclength_at(t);
  }
  psi[3] = psi[0] + l;
  double dev = periodic_distance(psi[0], s0, l);
  for (int k = 0; k < 3; ++k) {
    rep.arcs[k] = psi[k + 1] - psi[k];
    dev = std::max(dev, std::abs(rep.arcs[k] - l / 3.0));
  }
  rep.max_deviation = dev / l;
  rep.pass = rep.max_deviation <= tol;
  return rep;
}

HarmonicMap renormalize(const HarmonicMap& map, std::optional<double> anchor_arclength) {
  const auto& boundary = map.boundary();
  const auto& curve = boundary.target();
  const double l = curve.length();
  const auto psi = boundary.correspondence();
  const std::size_t n = psi.size();
  for (std::size_t j = 0; j + 1 < n; ++j) {
    if (!(psi[j + 1] > psi[j])) throw InputError("renormalize: boundary correspondence is not injective");
  }
  if (!(psi[0] + l > psi[n - 1])) throw InputError("renormalize: boundary correspondence is not injective");

  const double s0 = anchor_arclength ? *anchor_arclength : rightmost_arclength(curve);
  const double p = boundary.arclength_at(0.0);
  double t0_target = s0 + l * std::ceil((p - s0) / l);
  if (t0_target >= p + l) t0_target -= l;
  std::array<Complex, 3> u{};
  std::array<Complex, 3> z{};
  double t0 = 0.0;
  for (int k = 0; k < 3; ++k) {
    const double t = invert_correspondence(boundary, t0_target + k * l / 3.0, 0.0, 2.0 * kTwoPi);
    if (k == 0) t0 = t;
    u[k] = std::polar(1.0, t);
    z[k] = std::polar(1.0, kTwoPi * k / 3.0);
  }

  // M = B^{-1} A, where A and B send (z0, z1, z2) and (u0, u1, u2) to (0, 1, inf).
  using Mat = std::array<Complex, 4>;
  const auto cross = [](const std::array<Complex, 3>& w) {
    return Mat{w[1] - w[2], -w[0] * (w[1] - w[2]), w[1] - w[0], -w[2] * (w[1] - w[0])};
  };
  const Mat A = cross(z);
  const Mat B = cross(u);
  const Mat Binv{B[3], -B[1], -B[2], B[0]};
  const Mat M{Binv[0] * A[0] + Binv[1] * A[2], Binv[0] * A[1] + Binv[1] * A[3], Binv[2] * A[0] + Binv[3] * A[2],
              Binv[2] * A[1] + Binv[3] * A[3]};
  const Complex a = -M[1] / M[0];

  auto source = std::make_shared<MobiusComposed>(boundary.source_ptr(), a, t0);
  return analyze(BoundaryMap(std::move(source), n));
}

std::vector<std::pair<Complex, Complex>> default_lipschitz_pairs(const PolarGrid& grid, double step) {
  std::vector<std::pair<Complex, Complex>> pairs;
  constexpr std::size_t kChordPoints = 256;
  for (std::size_t i = 0; i < kChordPoints; ++i) {
    for (std::size_t j = i + 1; j < kChordPoints; ++j) {
      pairs.emplace_back(std::polar(1.0, kTwoPi * i / kChordPoints), std::polar(1.0, kTwoPi * j / kChordPoints));
    }
  }
  constexpr std::size_t kDirections = 64;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const Complex z = grid.point(i);
    for (std::size_t d = 0; d < kDirections; ++d) {
      const Complex w = z + std::polar(step, kTwoPi * d / kDirections);
      if (std::abs(w) <= 1.0) pairs.emplace_back(z, w);
    }
  }
  return pairs;
}

LipschitzReport empirical_lipschitz(const HarmonicMap& map, const std::vector<std::pair<Complex, Complex>>& pairs,
                                    const PolarGrid& grid, double K) {
  LipschitzReport rep;
  rep.pairs = pairs.size();
  std::vector<double> ratio(pairs.size());
  parallel_for(pairs.size(), [&](std::size_t i) {
    const auto [z1, z2] = pairs[i];
    const double d = std::abs(z1 - z2);
    ratio[i] = d > 0.0 ? std::abs(map(z1) - map(z2)) / d : 0.0;
  });
  for (std::size_t i = 0; i < ratio.size(); ++i) {
    if (ratio[i] > rep.sup) {
      rep.sup = ratio[i];
      rep.z1 = pairs[i].first;
      rep.z2 = pairs[i].second;
    }
  }
  for (const auto& s : sample_grid(map, grid)) rep.tangential_max = std::max(rep.tangential_max, s.tangential);
  rep.mean_value_bound = K * rep.tangential_max;
  return rep;
}

HeinzReport heinz_lower_check(const HarmonicMap& map, const PolarGrid& grid) {
  require_convex(map.boundary(), "heinz_lower_check");
  HeinzReport rep;
  rep.delta = distance_to_curve(map.boundary().target(), map(0.0));
  rep.threshold = 0.25 * rep.delta;
  rep.min_norm = kInf;
  for (const auto& s : sample_grid(map, grid)) {
    if (std::abs(s.z) < 1.0) rep.min_norm = std::min(rep.min_norm, s.norm);
  }
  rep.margin = rep.min_norm - rep.threshold;
  rep.pass = rep.margin > 0.0;
  return rep;
}

JacobianLowerReport jacobian_lower_check(const HarmonicMap& map, const PolarGrid& grid) {
  require_convex(map.boundary(), "jacobian_lower_check");
  JacobianLowerReport rep;
  rep.kappa = kInf;
  for (const auto& d : map.boundary().derivatives()) rep.kappa = std::min(rep.kappa, std::abs(d));
  rep.delta = distance_to_curve(map.boundary().target(), map(0.0));
  rep.threshold = 0.5 * rep.kappa * rep.delta;
  rep.J_min = kInf;
  for (const auto& s : sample_grid(map, grid)) {
    if (std::abs(s.z) < 1.0) rep.J_min = std::min(rep.J_min, s.jacobian);
  }
  rep.margin = rep.J_min - rep.threshold;
  rep.pass = rep.margin > 0.0;
  return rep;
}

namespace {

std::pair<double, double> criterion_sups(std::vector<Complex> derivs) {
  double log_sup = 0.0;
  for (const auto& d : derivs) {
    const double m = std::abs(d);
    log_sup = std::max(log_sup, m > 0.0 ? std::abs(std::log(m)) : kInf);
  }
  const auto h = hilbert_spectral(CircleFunction(std::move(derivs)));
  double h_sup = 0.0;
  for (const auto& v : h.samples()) h_sup = std::max(h_sup, std::abs(v));
  return {log_sup, h_sup};
}

}  // namespace

CriterionReport convex_qc_criterion(const BoundaryMap& boundary, const CriterionOptions& options) {
  require_convex(boundary, "convex_qc_criterion");
  const auto d = boundary.derivatives();
  CriterionReport rep;
  std::tie(rep.log_dF_sup, rep.hilbert_sup) = criterion_sups({d.begin(), d.end()});
  std::vector<Complex> half;
  for (std::size_t j = 0; j < d.size(); j += 2) half.push_back(d[j]);
  std::tie(rep.log_dF_sup_half, rep.hilbert_sup_half) = criterion_sups(std::move(half));
  rep.predicted_qc = rep.log_dF_sup <= options.log_threshold && rep.hilbert_sup <= options.hilbert_threshold;

  const auto map = analyze(boundary);
  const auto field = dilatation_field(map, boundary_approaching_grid(options.grid_levels, options.grid_angles));
  rep.measured_k_sup = field.k_sup;
  rep.measured_qc = field.k_sup < 1.0 - 1e-3;
  rep.consistent = rep.predicted_qc == rep.measured_qc;
  return rep;
}

}  // namespace hqmap
