#include "hqmap/boundary_kernels.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "hqmap/errors.hpp"
#include "hqmap/parallel.hpp"
#include "hqmap/quadrature.hpp"

namespace hqmap {
namespace {

double kernel_from(Complex diff, Complex direction) { return (std::conj(diff) * kI * direction).real(); }

double periodic_distance(double a, double b, double period) {
  const double d = std::fmod(std::abs(a - b), period);
  return std::min(d, period - d);
}

// Lower bound for W(d) = int_0^d omega on [0, top] from a uniform table, using
// W(d) >= W(g) + omega(g) (d - g) for the grid point g <= d.
class PrimitiveTable {
 public:
  PrimitiveTable(const ModulusOfContinuity& omega, double top, std::size_t cells) : step_(top / cells) {
    w_.resize(cells + 1);
    om_.resize(cells + 1);
    parallel_for(cells + 1, [&](std::size_t i) {
      const double g = step_ * static_cast<double>(i);
      w_[i] = omega.integral(g);
      om_[i] = omega(g);
    });
  }
  double lower(double d) const {
    const auto i = std::min(static_cast<std::size_t>(d / step_), w_.size() - 1);
    const double g = step_ * static_cast<double>(i);
    return w_[i] + om_[i] * std::max(0.0, d - g);
  }

 private:
  double step_;
  std::vector<double> w_;
  std::vector<double> om_;
};

}  // namespace

double kernel_K(const JordanCurve& curve, double s, double t) {
  return kernel_from(curve.point_at(t) - curve.point_at(s), curve.tangent_at(s));
}

double kernel_KF(const BoundaryMap& boundary, double t, double tau) {
  return kernel_from(boundary.value_at(t) - boundary.value_at(tau), boundary.derivative_at(tau));
}

double kernel_KF_pullback(const BoundaryMap& boundary, double t, double tau) {
  const auto& curve = boundary.target();
  return boundary.speed_at(tau) * kernel_K(curve, boundary.arclength_at(tau), boundary.arclength_at(t));
}

KernelBoundReport kernel_bound_check(const JordanCurve& curve, const ModulusOfContinuity& omega,
                                     const BoundaryMap* boundary, double slack) {
  KernelBoundReport rep;
  const std::size_t m = curve.size();
  const double h = curve.spacing();
  std::vector<double> w(m / 2 + 1);
  parallel_for(w.size(), [&](std::size_t k) { w[k] = omega.integral(h * static_cast<double>(k)); });

  const auto z = curve.samples();
  const auto tan = curve.tangents();
  std::vector<KernelEvaluation> worst(m);
  parallel_for(m, [&](std::size_t i) {
    KernelEvaluation best{0, 0, 0, 0, 0};
    double excess = -std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < m; ++j) {
      const std::size_t lag = std::min((i + m - j) % m, (j + m - i) % m);
      const double value = kernel_from(z[j] - z[i], tan[i]);
      const double e = std::abs(value) - w[lag];
      if (e > excess) {
        excess = e;
        best = {curve.node(i), curve.node(j), value, w[lag], 0.0};
      }
    }
    worst[i] = best;
  });
  rep.pairs = m * m;
  rep.max_excess = -std::numeric_limits<double>::infinity();
  for (const auto& e : worst) {
    if (std::abs(e.value) - e.bound > rep.max_excess) {
      rep.max_excess = std::abs(e.value) - e.bound;
      rep.worst = e;
    }
  }
  rep.pass = rep.max_excess <= slack;

  if (boundary != nullptr) {
    rep.pullback_checked = true;
    const std::size_t n = boundary->size();
    const double l = boundary->target().length();
    const PrimitiveTable table(omega, 0.5 * l, 8192);
    const auto vals = boundary->values();
    const auto ders = boundary->derivatives();
    const auto psi = boundary->correspondence();
    std::vector<KernelEvaluation> pw(n);
    parallel_for(n, [&](std::size_t i) {
      KernelEvaluation best{0, 0, 0, 0, 0};
      double excess = -std::numeric_limits<double>::infinity();
      const double speed = std::abs(ders[i]);
      for (std::size_t j = 0; j < n; ++j) {
        const double value = kernel_from(vals[j] - vals[i], ders[i]);
        const double bound = speed * table.lower(periodic_distance(psi[j], psi[i], l));
        if (std::abs(value) - bound > excess) {
          excess = std::abs(value) - bound;
          const double s = std::sin(0.5 * (boundary->angle(j) - boundary->angle(i)));
          best = {boundary->angle(j), boundary->angle(i), value, bound, 2.0 * s * s};
        }
      }
      pw[i] = best;
    });
    rep.pullback_pairs = n * n;
    rep.pullback_max_excess = -std::numeric_limits<double>::infinity();
    for (const auto& e : pw) {
      if (std::abs(e.value) - e.bound > rep.pullback_max_excess) {
        rep.pullback_max_excess = std::abs(e.value) - e.bound;
        rep.pullback_worst = e;
      }
    }
    rep.pullback_pass = rep.pullback_max_excess <= slack;
  }
  return rep;
}

BoundaryJacobian boundary_jacobian(const BoundaryMap& boundary, double tau,
                                   const std::optional<ModulusOfContinuity>& omega) {
  const double lip = boundary.max_speed();
  if (!std::isfinite(lip)) throw PreconditionError("boundary_jacobian: boundary data is not Lipschitz");
  const std::size_t n = boundary.size();
  const double step = kTwoPi / static_cast<double>(n);
  const Complex p0 = boundary.value_at(tau);
  const Complex d0 = boundary.derivative_at(tau);
  std::vector<double> terms(n);
  parallel_for(n, [&](std::size_t j) {
    const double x = (static_cast<double>(j) + 0.5) * step;
    const double s = std::sin(0.5 * x);
    terms[j] = kernel_from(boundary.value_at(tau + x) - p0, d0) / (2.0 * s * s);
  });
  double sum = 0.0;
  for (double v : terms) sum += v;

  BoundaryJacobian out;
  out.value = sum * step / kTwoPi;
  const auto om = omega ? *omega : tangent_modulus(boundary.target());
  out.remainder_bound =
      std::abs(d0) * lip * kPi * (0.5 * dini_integral(om, lip * step).value + om(0.5 * lip * step));
  return out;
}

JacobianUpperBound jacobian_upper_bound(const BoundaryMap& boundary, const ModulusOfContinuity& omega,
                                        double phi) {
  const double l = boundary.target().length();
  const double lip = boundary.max_speed();
  const double psi0 = boundary.arclength_at(phi);
  const auto integrand = [&](double x) {
    const double rho = periodic_distance(boundary.arclength_at(phi + x), psi0, l);
    return omega.integral(rho) / (x * x);
  };
  constexpr int kLevels = 40;
  double sum = 0.0;
  for (int k = 0; k < kLevels; ++k) {
    const double hi = kPi * std::ldexp(1.0, -k);
    const double lo = 0.5 * hi;
    sum += quad::integrate(integrand, lo, hi);
    sum += quad::integrate(integrand, -hi, -lo);
  }
  const double x_min = kPi * std::ldexp(1.0, -kLevels);
  const double prefactor = 0.25 * kPi * boundary.speed_at(phi);
  JacobianUpperBound out;
  out.value = prefactor * sum;
  out.tail_bound = prefactor * 2.0 * lip * dini_integral(omega, lip * x_min).value;
  return out;
}

}  // namespace hqmap
