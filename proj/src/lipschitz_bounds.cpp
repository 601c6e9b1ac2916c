#include "hqmap/lipschitz_bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "hqmap/errors.hpp"
#include "hqmap/quadrature.hpp"

namespace hqmap {
namespace {

constexpr double kTiny = 1e-300;
const double kLogTiny = std::log(kTiny);
const double kLn2 = std::log(2.0);

}  // namespace

bool MoriBound::holds(Complex z1, Complex z2, Complex w1, Complex w2) const {
  const double lhs = std::abs(w1 - w2);
  const double rhs = Lambda * std::pow(std::abs(z1 - z2), alpha);
  return lhs <= rhs * (1.0 + 1e-12);
}

MoriBound mori_holder(double K, double B_gamma, double area) {
  if (!(K >= 1.0)) throw InputError("mori_holder: K must be >= 1");
  if (!(B_gamma >= 1.0)) throw InputError("mori_holder: chord-arc constant must be >= 1");
  if (!(area > 0.0)) throw InputError("mori_holder: area must be positive");
  MoriBound m;
  m.K = K;
  m.B_gamma = B_gamma;
  m.area = area;
  const double s = 1.0 + 2.0 * B_gamma;
  m.alpha = 2.0 / (K * s * s);
  m.Lambda = 4.0 * std::pow(2.0, m.alpha) * s * std::sqrt(kTwoPi * K * area / kLn2);
  return m;
}

// ---------------------------------------------------------------------------

namespace {

class ConstantFunction final : public IntegrableFunction {
 public:
  explicit ConstantFunction(double c) : c_(c) {}
  double value(double) const override { return c_; }
  double cumulative(double x) const override { return c_ * x; }
  std::pair<double, double> moments(double a, double b) const override {
    return {c_ * (b - a), 0.5 * c_ * (b - a) * (b + a)};
  }
  bool integrable(double) const override { return true; }
  std::optional<PowerTail> tail() const override {
    return PowerTail{c_, 0.0, std::numeric_limits<double>::infinity()};
  }
  std::string describe() const override {
    std::ostringstream os;
    os.precision(17);
    os << "const:" << c_;
    return os.str();
  }

 private:
  double c_;
};

class PowerMixture final : public IntegrableFunction {
 public:
  explicit PowerMixture(std::vector<std::pair<double, double>> terms) : terms_(std::move(terms)) {}
  double value(double x) const override {
    double s = 0.0;
    for (const auto& [c, p] : terms_) s += c * std::pow(x, p);
    return s;
  }
  double cumulative(double x) const override {
    double s = 0.0;
    for (const auto& [c, p] : terms_) s += c * std::pow(x, p + 1.0) / (p + 1.0);
    return s;
  }
  std::pair<double, double> moments(double a, double b) const override {
    double m0 = 0.0;
    double m1 = 0.0;
    for (const auto& [c, p] : terms_) {
      m0 += c * (std::pow(b, p + 1.0) - std::pow(a, p + 1.0)) / (p + 1.0);
      m1 += c * (std::pow(b, p + 2.0) - std::pow(a, p + 2.0)) / (p + 2.0);
    }
    return {m0, m1};
  }
  bool integrable(double) const override { return true; }
  std::optional<PowerTail> tail() const override {
    const double p = terms_.front().second;
    double c = 0.0;
    for (const auto& t : terms_) {
      if (t.second != p) return std::nullopt;
      c += t.first;
    }
    return PowerTail{c, p, std::numeric_limits<double>::infinity()};
  }
  std::string describe() const override {
    std::ostringstream os;
    os.precision(17);
    os << "power:";
    for (std::size_t i = 0; i < terms_.size(); ++i) os << (i ? "," : "") << terms_[i].first << "@" << terms_[i].second;
    return os.str();
  }

 private:
  std::vector<std::pair<double, double>> terms_;
};

class DiniIntegrand final : public IntegrableFunction {
 public:
  explicit DiniIntegrand(ModulusOfContinuity omega) : omega_(std::move(omega)) {}
  double value(double x) const override { return x > 0.0 ? omega_(x) / x : 0.0; }
  double cumulative(double x) const override { return x > 0.0 ? dini_integral(omega_, x).value : 0.0; }
  std::pair<double, double> moments(double a, double b) const override {
    return {cumulative(b) - cumulative(a), omega_.integral(b) - omega_.integral(a)};
  }
  bool integrable(double b) const override { return dini_integral(omega_, b).is_dini; }
  std::optional<PowerTail> tail() const override {
    switch (omega_.kind()) {
      case ModulusOfContinuity::Kind::power:
        return PowerTail{omega_.scale_factor() * omega_.power_coefficient(), omega_.power_exponent() - 1.0,
                         omega_.cap_at()};
      case ModulusOfContinuity::Kind::empirical: {
        const double g0 = std::min(omega_.grid().front(), omega_.cap_at());
        return PowerTail{omega_.scale_factor() * omega_.table().front() / omega_.grid().front(), 0.0, g0};
      }
      case ModulusOfContinuity::Kind::closed_form:
        break;
    }
    return std::nullopt;
  }
  std::string describe() const override { return "omega(y)/y, omega " + omega_.label(); }

 private:
  ModulusOfContinuity omega_;
};

}  // namespace

std::shared_ptr<const IntegrableFunction> constant_function(double c) {
  if (!(c >= 0.0) || !std::isfinite(c)) throw InputError("constant A: value must be finite and >= 0");
  return std::make_shared<ConstantFunction>(c);
}

std::shared_ptr<const IntegrableFunction> power_mixture(std::vector<std::pair<double, double>> terms) {
  if (terms.empty()) throw InputError("power mixture: no terms");
  for (const auto& [c, p] : terms) {
    if (!(c >= 0.0) || !std::isfinite(c)) throw InputError("power mixture: coefficients must be finite and >= 0");
    if (!(p > -1.0) || !std::isfinite(p)) throw InputError("power mixture: exponents must exceed -1");
  }
  return std::make_shared<PowerMixture>(std::move(terms));
}

std::shared_ptr<const IntegrableFunction> dini_integrand(ModulusOfContinuity omega) {
  return std::make_shared<DiniIntegrand>(std::move(omega));
}

std::shared_ptr<const IntegrableFunction> integrable_from_string(const std::string& text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos) throw InputError("A spec: expected const:C or power:c@p,...");
  const auto kind = text.substr(0, colon);
  const auto body = text.substr(colon + 1);
  const auto parse = [&](const std::string& s) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(s, &used);
    } catch (const std::exception&) {
      throw InputError("A spec: bad number \"" + s + "\"");
    }
    if (used != s.size()) throw InputError("A spec: bad number \"" + s + "\"");
    return v;
  };
  if (kind == "const") return constant_function(parse(body));
  if (kind == "power") {
    std::vector<std::pair<double, double>> terms;
    std::stringstream ss(body);
    std::string item;
    while (std::getline(ss, item, ',')) {
      const auto at = item.find('@');
      if (at == std::string::npos) throw InputError("A spec: power terms are c@p");
      terms.emplace_back(parse(item.substr(0, at)), parse(item.substr(at + 1)));
    }
    return power_mixture(std::move(terms));
  }
  throw InputError("A spec: unknown kind \"" + kind + "\"");
}

// ---------------------------------------------------------------------------

ConvexMajorant eremenko_majorant(std::shared_ptr<const IntegrableFunction> A, double B, double q, double log_Q,
                                 std::size_t depth) {
  if (!A) throw InputError("eremenko_majorant: null A");
  if (!(B > 0.0) || !std::isfinite(B)) throw InputError("eremenko_majorant: B must be positive");
  if (!(q > 0.0) || !std::isfinite(q)) throw InputError("eremenko_majorant: q must be positive");
  if (!std::isfinite(log_Q)) throw InputError("eremenko_majorant: Q must be positive and finite");
  if (depth < 1) throw InputError("eremenko_majorant: depth must be >= 1");
  if (!A->integrable(B)) throw InputError("eremenko_majorant: A is not integrable on (0, B]");
  ConvexMajorant m;
  m.a_ = A;
  m.b_ = B;
  m.q_ = q;
  m.log_q_ = log_Q;
  m.mass_ = A->cumulative(B);
  if (!(m.mass_ > 0.0) || !std::isfinite(m.mass_)) throw InputError("eremenko_majorant: A must have positive mass");

  const auto tail = A->tail();
  const double log_mass = std::log(m.mass_);
  const double shrink = -kLn2 + std::log1p(-1e-12);
  m.log_x_.reserve(depth + 1);
  m.log_x_.push_back(std::log(B));
  for (std::size_t k = 0; k < depth; ++k) {
    const double lx = m.log_x_.back();
    const double cand = lx + shrink;
    const double log_target = log_mass - static_cast<double>(k + 1) * kLn2;
    double next = cand;
    if (tail && lx <= std::log(tail->x0)) {
      if (tail->c > 0.0) {
        const double p1 = tail->p + 1.0;
        next = std::min(cand, (log_target + std::log(p1) - std::log(tail->c)) / p1);
      }
    } else {
      if (cand < kLogTiny) {
        throw RangeError("eremenko_majorant: breakpoint underflow", static_cast<int>(k));
      }
      const double target = std::exp(log_target);
      const auto below = [&](double l) { return A->cumulative(std::exp(l)) <= target; };
      if (!below(cand)) {
        double hi = cand;
        double step = 1.0;
        double lo = hi - step;
        while (!below(lo)) {
          hi = lo;
          step *= 2.0;
          lo = std::max(hi - step, kLogTiny);
          if (lo == kLogTiny && !below(lo)) {
            throw RangeError("eremenko_majorant: breakpoint underflow", static_cast<int>(k));
          }
        }
        for (int it = 0; it < 200 && hi - lo > 1e-15 * std::max(1.0, std::abs(lo)); ++it) {
          const double mid = 0.5 * (lo + hi);
          if (below(mid)) {
            lo = mid;
          } else {
            hi = mid;
          }
        }
        next = lo;
      }
      ++m.numeric_count_;
    }
    m.log_x_.push_back(next);
  }

  // int A xi over [x_{k+1}, x_k]: (k + x_k/d) m0 - m1/d, d = x_k - x_{k+1}.
  std::size_t last = 0;
  for (std::size_t k = 0; k < depth; ++k) {
    if (m.log_x_[k + 1] < kLogTiny) break;
    const double xk = std::exp(m.log_x_[k]);
    const double xk1 = std::exp(m.log_x_[k + 1]);
    const double d = xk - xk1;
    const auto [m0, m1] = A->moments(xk1, xk);
    m.integral_ += static_cast<double>(k) * m0 + (xk * m0 - m1) / d;
    last = k + 1;
  }
  const auto kk = static_cast<double>(last);
  m.tail_bound_ = m.mass_ * std::ldexp(kk + 2.0, 1 - static_cast<int>(last));

  if (q < 1.0) {
    // Lower convex hull of (X_k, k X_k), X_k = Q x_k^-q.
    auto& h = m.hull_;
    for (std::size_t k = 0; k <= depth; ++k) {
      while (h.size() >= 2 && m.hull_slope(h[h.size() - 2], h.back()) >= m.hull_slope(h.back(), k)) h.pop_back();
      h.push_back(k);
    }
  }
  return m;
}

double ConvexMajorant::xi_from_log(double lx) const {
  if (lx >= log_x_.front()) return 0.0;
  if (lx < log_x_.back()) {
    throw RangeError("xi: argument below the deepest breakpoint", static_cast<int>(depth()));
  }
  // log_x_ is strictly decreasing; find k with log_x_[k+1] <= lx < log_x_[k].
  const auto it = std::upper_bound(log_x_.begin(), log_x_.end(), lx, std::greater<double>());
  const auto k = static_cast<std::size_t>(it - log_x_.begin()) - 1;
  if (k >= depth()) return static_cast<double>(depth());
  const double r = std::exp(lx - log_x_[k]);
  const double s = std::exp(log_x_[k + 1] - log_x_[k]);
  return static_cast<double>(k) + (1.0 - r) / (1.0 - s);
}

double ConvexMajorant::xi(double x) const {
  if (!(x > 0.0)) throw InputError("xi: argument must be positive");
  return xi_from_log(std::log(x));
}

double ConvexMajorant::log_xi_inverse(double v) const {
  if (!(v >= 0.0)) throw InputError("xi inverse: value must be >= 0");
  if (v == 0.0) return log_x_.front();
  const double kf = std::floor(v);
  if (kf >= static_cast<double>(depth())) {
    if (v == static_cast<double>(depth())) return log_x_.back();
    throw RangeError("xi inverse: value beyond the constructed depth", static_cast<int>(depth()));
  }
  const auto k = static_cast<std::size_t>(kf);
  const double frac = v - kf;
  const double s = std::exp(log_x_[k + 1] - log_x_[k]);
  return log_x_[k] + std::log1p(-frac * (1.0 - s));
}

double ConvexMajorant::hull_position(std::size_t k) const { return log_q_ - q_ * log_x_[k]; }

double ConvexMajorant::hull_slope(std::size_t i, std::size_t j) const {
  const double e = std::exp(hull_position(i) - hull_position(j));
  return (static_cast<double>(j) - static_cast<double>(i) * e) / -std::expm1(hull_position(i) - hull_position(j));
}

double ConvexMajorant::chi_from_log(double log_x) const {
  if (hull_.empty()) return xi_from_log((log_q_ - log_x) / q_);
  if (log_x <= hull_position(0)) return 0.0;
  const auto it = std::upper_bound(hull_.begin(), hull_.end(), log_x,
                                   [&](double l, std::size_t k) { return l < hull_position(k); });
  if (it == hull_.end()) return static_cast<double>(depth());
  const std::size_t a = *(it - 1);
  const double s = hull_slope(a, *it);
  return s - (s - static_cast<double>(a)) * std::exp(hull_position(a) - log_x);
}

double ConvexMajorant::chi(double x) const {
  if (!(x > 0.0)) throw InputError("chi: argument must be positive");
  return chi_from_log(std::log(x));
}

double ConvexMajorant::log_chi_inverse(double v) const {
  if (hull_.empty()) return log_q_ - q_ * log_xi_inverse(v);
  if (!(v >= 0.0)) throw InputError("chi inverse: value must be >= 0");
  if (v > static_cast<double>(depth())) {
    throw RangeError("chi inverse: value beyond the constructed depth", static_cast<int>(depth()));
  }
  if (v == 0.0) return hull_position(0);
  const auto it = std::lower_bound(hull_.begin(), hull_.end(), v,
                                   [](std::size_t k, double x) { return static_cast<double>(k) < x; });
  const std::size_t b = *it;
  if (static_cast<double>(b) == v) return hull_position(b);
  const std::size_t a = *(it - 1);
  const double s = hull_slope(a, b);
  return hull_position(a) + std::log(s - static_cast<double>(a)) - std::log(s - v);
}

ConvexMajorant::ConvexityCheck ConvexMajorant::convexity_check(std::size_t points) const {
  ConvexityCheck c;
  c.points = points;
  const double lo = log_q_ - q_ * log_x_.front() - 1.0;
  double hi = log_chi_inverse(static_cast<double>(depth()) - 1.0);
  hi = std::min(hi, 600.0);
  if (!(hi > lo) || points < 3) return c;
  const auto g_log = [&](double l) { return std::exp(l) * chi_from_log(l); };
  std::vector<double> lg(points);
  std::vector<double> g(points);
  for (std::size_t i = 0; i < points; ++i) {
    lg[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(points - 1);
    g[i] = g_log(lg[i]);
  }
  c.worst_excess = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i + 1 < points; ++i) {
    for (std::size_t j = i + 1; j <= std::min(i + 2, points - 1); ++j) {
      const double mid = std::log(0.5 * (std::exp(lg[i]) + std::exp(lg[j])));
      const double chord = 0.5 * (g[i] + g[j]);
      const double excess = (g_log(mid) - chord) / std::max({g[i], g[j], 1e-300});
      c.worst_excess = std::max(c.worst_excess, excess);
    }
  }
  c.pass = c.worst_excess <= 1e-12;
  return c;
}

// ---------------------------------------------------------------------------

UpsilonResult upsilon(double K, const JordanCurve& curve, const ModulusOfContinuity& omega, const MoriBound& mori) {
  if (!(K >= 1.0)) throw InputError("upsilon: K must be >= 1");
  UpsilonResult r;
  r.C1 = 0.25 * kPi;
  const double bl = mori.B_gamma * mori.Lambda;
  r.B = bl * std::pow(kPi, mori.alpha);
  const auto d = dini_integral(omega, r.B);
  if (!d.is_dini) throw CertificateUnavailable("upsilon: the modulus of continuity is not Dini");
  r.dini = d.value;
  r.dini_error = d.error_estimate;
  r.upsilon = 8.0 * K * r.C1 * mori.B_gamma / mori.alpha * d.value;
  r.upsilon_literal = r.upsilon / bl;
  const double w_l = omega(curve.length());
  if (!(w_l > 0.0)) throw CertificateUnavailable("upsilon: omega(l) must be positive");
  r.log_Q = std::log(w_l) + (2.0 / mori.alpha) * std::log(bl);
  r.log_Q_literal = std::log(w_l) + (2.0 - 2.0 / mori.alpha) * std::log(bl);
  return r;
}

LipschitzCertificate lipschitz_certificate(double K, const JordanCurve& curve, const ModulusOfContinuity& omega) {
  LipschitzCertificate c;
  c.K = K;
  c.B_gamma = chord_arc_constant(curve);
  c.area = curve.enclosed_area();
  c.length = curve.length();
  const auto mori = mori_holder(K, c.B_gamma, c.area);
  c.alpha = mori.alpha;
  c.Lambda = mori.Lambda;
  const auto u = upsilon(K, curve, omega, mori);
  c.B = u.B;
  c.q = 2.0 / mori.alpha - 1.0;
  c.log_Q = u.log_Q;
  c.Upsilon = u.upsilon;
  c.Upsilon_literal = u.upsilon_literal;
  c.C1 = u.C1;
  c.dini_error = u.dini_error;

  const auto depth = static_cast<std::size_t>(std::ceil(u.upsilon)) + 2;
  const auto chi = eremenko_majorant(dini_integrand(omega), u.B, c.q, u.log_Q, depth);
  c.x_k_count = chi.depth();
  c.x_k_numeric = chi.numeric_count();
  c.majorant_tail = chi.integral_tail_bound();
  const double log_l = std::log(0.5 * kPi * kPi * K) + chi.log_chi_inverse(u.upsilon);
  c.L_bound_log10 = log_l / std::log(10.0);
  c.L_bound = log_l < 709.0 ? std::exp(log_l) : std::numeric_limits<double>::infinity();
  c.f_bound_log10 = c.L_bound_log10 + std::log10(K);
  return c;
}

bool certificate_covers(const LipschitzCertificate& cert, double value) {
  if (!(value > 0.0)) return true;
  return cert.f_bound_log10 >= std::log10(value);
}

JensenCheck jensen_check(const BoundaryMap& boundary, const ModulusOfContinuity& omega, const ConvexMajorant& chi,
                         double K) {
  const auto d = boundary.derivatives();
  std::size_t arg = 0;
  for (std::size_t j = 1; j < d.size(); ++j) {
    if (std::abs(d[j]) > std::abs(d[arg])) arg = j;
  }
  const double phi = boundary.angle(arg);
  const double l = boundary.target().length();
  const double c1 = 0.25 * kPi;
  JensenCheck out;
  out.M = std::abs(d[arg]) / (kTwoPi * K * c1);
  const auto Phi = [&](double t) { return t > 0.0 ? t * chi.chi(t) : 0.0; };
  out.lhs = Phi(out.M);

  const double psi0 = boundary.arclength_at(phi);
  const auto integrand = [&](double x) {
    double rho = std::fmod(std::abs(boundary.arclength_at(phi + x) - psi0), l);
    rho = std::min(rho, l - rho);
    return Phi(rho / (x * x) * omega(rho));
  };
  double sum = 0.0;
  for (int k = 0; k < 30; ++k) {
    const double hi = kPi * std::ldexp(1.0, -k);
    for (const double sgn : {1.0, -1.0}) {
      try {
        sum += quad::integrate([&](double x) { return integrand(sgn * x); }, 0.5 * hi, hi);
      } catch (const RangeError&) {
        // Beyond the constructed depth; leaving the panel out only lowers rhs.
      }
    }
  }
  out.rhs = sum / kTwoPi;
  out.pass = out.lhs <= out.rhs * (1.0 + 1e-9) + 1e-300;
  return out;
}

}  // namespace hqmap
