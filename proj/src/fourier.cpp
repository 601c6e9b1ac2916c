#include "hqmap/fourier.hpp"

#include <fftw3.h>

#include <cstring>
#include <mutex>

#include "hqmap/errors.hpp"

namespace hqmap::fourier {
namespace {

// FFTW's planner is not thread-safe; execution on a private plan is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

std::vector<Complex> transform(std::span<const Complex> in, int sign) {
  const std::size_t n = in.size();
  if (!is_power_of_two(n)) {
    throw InputError("fourier: sample count must be a power of two, got " + std::to_string(n));
  }
  std::vector<Complex> out(n);
  std::vector<Complex> work(in.begin(), in.end());
  auto* src = reinterpret_cast<fftw_complex*>(work.data());
  auto* dst = reinterpret_cast<fftw_complex*>(out.data());
  fftw_plan plan;
  {
    std::lock_guard lock(planner_mutex());
    plan = fftw_plan_dft_1d(static_cast<int>(n), src, dst, sign, FFTW_ESTIMATE);
  }
  fftw_execute(plan);
  {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(plan);
  }
  return out;
}

}  // namespace

std::vector<Complex> coefficients(std::span<const Complex> samples) {
  auto c = transform(samples, FFTW_FORWARD);
  const double scale = 1.0 / static_cast<double>(samples.size());
  for (auto& v : c) v *= scale;
  return c;
}

std::vector<Complex> synthesize(std::span<const Complex> coeffs) {
  return transform(coeffs, FFTW_BACKWARD);
}

std::vector<Complex> differentiate(std::span<const Complex> samples) {
  auto c = coefficients(samples);
  const std::size_t n = c.size();
  for (std::size_t k = 0; k < n; ++k) {
    if (k == n / 2) {
      c[k] = 0.0;
      continue;
    }
    c[k] *= Complex(0.0, static_cast<double>(frequency(k, n)));
  }
  return synthesize(c);
}

}  // namespace hqmap::fourier
