#include "hqmap/hilbert_transform.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include "hqmap/errors.hpp"
#include "hqmap/fourier.hpp"
#include "hqmap/parallel.hpp"
#include "hqmap/quadrature.hpp"

namespace hqmap {

CircleFunction::CircleFunction(std::vector<Complex> samples) : samples_(std::move(samples)) {
  if (!is_power_of_two(samples_.size()) || samples_.size() < 4) {
    throw InputError("CircleFunction: sample count must be a power of two >= 4");
  }
}

Complex CircleFunction::mean() const {
  Complex s = 0.0;
  for (const auto& v : samples_) s += v;
  return s / static_cast<double>(samples_.size());
}

PvResult hilbert_pv(const CircleFunction& fn) {
  const std::size_t n = fn.size();
  if (n < 128) throw InputError("hilbert_pv: need N >= 128");
  const double step = kTwoPi / static_cast<double>(n);
  // weight[m] = 1 / (2 tan(m*step/2)) for the odd offsets m used by the rule.
  std::vector<double> weight(n / 2 + 1, 0.0);
  for (std::size_t m = 1; m <= n / 2; ++m) weight[m] = 0.5 / std::tan(0.5 * step * static_cast<double>(m));

  std::vector<Complex> out(n);
  std::vector<double> err(n);
  const auto x = fn.samples();
  parallel_for(n, [&](std::size_t i) {
    const auto diff = [&](std::size_t m) { return x[(i + m) % n] - x[(i + n - m) % n]; };
    Complex fine = 0.0;
    for (std::size_t m = 1; m < n / 2; m += 2) fine += diff(m) * weight[m];
    fine *= 2.0 * step;
    Complex coarse = 0.0;
    for (std::size_t m = 2; m < n / 2; m += 4) coarse += diff(m) * weight[m];
    coarse *= 4.0 * step;
    out[i] = -fine / kPi;
    err[i] = std::abs(fine - coarse) / (3.0 * kPi);
  });
  return {CircleFunction(std::move(out)), *std::max_element(err.begin(), err.end())};
}

CircleFunction hilbert_spectral(const CircleFunction& fn) {
  auto c = fourier::coefficients(fn.samples());
  const std::size_t n = c.size();
  for (std::size_t k = 0; k < n; ++k) {
    const long f = fourier::frequency(k, n);
    if (f == 0 || k == n / 2) {
      c[k] = 0.0;
    } else {
      c[k] *= Complex(0.0, f > 0 ? -1.0 : 1.0);
    }
  }
  return CircleFunction(fourier::synthesize(c));
}

namespace {

// Im of u_0 + 2 sum_{n=1}^{N/2-1} u_n z^n for the real samples u.
double conjugate_of_real_part(std::span<const Complex> u_coeffs, Complex z) {
  const std::size_t n = u_coeffs.size();
  Complex p = 0.0;
  for (std::size_t k = n / 2 - 1; k >= 1; --k) p = (p + 2.0 * u_coeffs[k]) * z;
  return (p + u_coeffs[0]).imag();
}

}  // namespace

double conjugate_identity_check(const CircleFunction& boundary) {
  const std::size_t n = boundary.size();
  const auto conj_fn = hilbert_spectral(boundary);
  std::vector<Complex> re(n), im(n);
  for (std::size_t j = 0; j < n; ++j) {
    re[j] = boundary[j].real();
    im[j] = boundary[j].imag();
  }
  const auto re_c = fourier::coefficients(re);
  const auto im_c = fourier::coefficients(im);

  double worst = 0.0;
  for (double r : {0.3, 0.6, 0.9}) {
    for (int a = 0; a < 64; ++a) {
      const double phi = kTwoPi * a / 64.0;
      const Complex z = std::polar(r, phi);
      Complex lhs = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        const double kernel = (1.0 - r * r) / (1.0 - 2.0 * r * std::cos(boundary.angle(j) - phi) + r * r);
        lhs += kernel * conj_fn[j];
      }
      lhs /= static_cast<double>(n);
      const Complex rhs(conjugate_of_real_part(re_c, z), conjugate_of_real_part(im_c, z));
      worst = std::max(worst, std::abs(lhs - rhs));
    }
  }
  return worst;
}

namespace {

// h * int_h^{2pi} omega(t)/t^2 dt on dyadic panels.
double privalov_middle_term(const ModulusOfContinuity& omega, double h) {
  double sum = 0.0;
  double lo = h;
  while (lo < kTwoPi) {
    const double hi = std::min(2.0 * lo, kTwoPi);
    sum += quad::integrate([&](double t) { return omega(t) / (t * t); }, lo, hi, quad::gauss24());
    lo = hi;
  }
  return h * sum;
}

bool solve3(std::array<std::array<double, 4>, 3> m, std::array<double, 3>& x) {
  for (int col = 0; col < 3; ++col) {
    int pivot = col;
    for (int r = col + 1; r < 3; ++r) {
      if (std::abs(m[r][col]) > std::abs(m[pivot][col])) pivot = r;
    }
    if (std::abs(m[pivot][col]) < 1e-300) return false;
    std::swap(m[col], m[pivot]);
    for (int r = 0; r < 3; ++r) {
      if (r == col) continue;
      const double f = m[r][col] / m[col][col];
      for (int c = col; c < 4; ++c) m[r][c] -= f * m[col][c];
    }
  }
  for (int i = 0; i < 3; ++i) x[i] = m[i][3] / m[i][i];
  return true;
}

}  // namespace

PrivalovReport privalov_report(const CircleFunction& fn_derivative, const ModulusOfContinuity& omega, int levels) {
  const std::size_t n = fn_derivative.size();
  if (levels < 1 || n < (std::size_t{4} << levels)) {
    throw InputError("privalov_report: need N >= 4 * 2^levels");
  }
  const double step = kTwoPi / static_cast<double>(n);
  const auto x = fn_derivative.samples();

  double scale = 0.0;
  for (const auto& v : x) scale = std::max(scale, std::abs(v));
  std::vector<char> bad(n / 2 + 1, 0);
  parallel_for(n / 2, [&](std::size_t idx) {
    const std::size_t k = idx + 1;
    double best = 0.0;
    for (std::size_t i = 0; i < n; ++i) best = std::max(best, std::abs(x[(i + k) % n] - x[i]));
    if (best > omega(step * static_cast<double>(k)) + 1e-9 * (scale + 1.0)) bad[k] = 1;
  });
  if (std::any_of(bad.begin(), bad.end(), [](char b) { return b != 0; })) {
    throw PreconditionError("privalov_report: the derivative samples exceed the supplied modulus");
  }

  const auto hx = hilbert_spectral(fn_derivative);
  PrivalovReport rep;
  for (int j = 1; j <= levels; ++j) {
    const std::size_t shift = n >> j;
    const double h = step * static_cast<double>(shift);
    double lhs = 0.0;
    for (std::size_t i = 0; i < n; ++i) lhs = std::max(lhs, std::abs(hx[(i + shift) % n] - hx[i]));
    rep.h.push_back(h);
    rep.lhs.push_back(lhs);
    rep.term_a.push_back(dini_integral(omega, 2.0 * h).value);
    rep.term_b.push_back(privalov_middle_term(omega, h));
    rep.term_c.push_back(omega(h));
  }

  const double lhs_max = *std::max_element(rep.lhs.begin(), rep.lhs.end());
  if (lhs_max <= 1e-12 * (scale + 1.0)) {
    rep.pass = true;
    return rep;
  }

  // Minimize A + B + C over the polyhedron by vertex enumeration; the rows are
  // the h-constraints followed by A >= 0, B >= 0, C >= 0.
  std::vector<std::array<double, 4>> rows;
  for (std::size_t j = 0; j < rep.h.size(); ++j) {
    rows.push_back({rep.term_a[j], rep.term_b[j], rep.term_c[j], rep.lhs[j]});
  }
  rows.push_back({1, 0, 0, 0});
  rows.push_back({0, 1, 0, 0});
  rows.push_back({0, 0, 1, 0});
  double best = std::numeric_limits<double>::infinity();
  std::array<double, 3> best_x{};
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = i + 1; j < rows.size(); ++j) {
      for (std::size_t k = j + 1; k < rows.size(); ++k) {
        std::array<double, 3> sol{};
        if (!solve3({rows[i], rows[j], rows[k]}, sol)) continue;
        bool feasible = true;
        for (const auto& r : rows) {
          const double val = r[0] * sol[0] + r[1] * sol[1] + r[2] * sol[2];
          if (val < r[3] - 1e-10 * (std::abs(r[3]) + 1e-300)) {
            feasible = false;
            break;
          }
        }
        const double obj = sol[0] + sol[1] + sol[2];
        if (feasible && obj < best) {
          best = obj;
          best_x = sol;
        }
      }
    }
  }
  if (std::isfinite(best)) {
    rep.a = std::max(0.0, best_x[0]);
    rep.b = std::max(0.0, best_x[1]);
    rep.c = std::max(0.0, best_x[2]);
    rep.pass = true;
  } else {
    rep.a = rep.b = rep.c = std::numeric_limits<double>::infinity();
    rep.pass = false;
  }
  return rep;
}

}  // namespace hqmap
