#pragma once

#include <span>
#include <vector>

#include "hqmap/types.hpp"

namespace hqmap::fourier {

/// Normalized DFT coefficients c_k = (1/N) sum_j x_j e^{-2 pi i jk/N}, in FFT
/// order (index k holds frequency k for k < N/2 and k - N otherwise).
/// Backed by FFTW; N must be a power of two.
std::vector<Complex> coefficients(std::span<const Complex> samples);

/// Inverse of coefficients(): x_j = sum_k c_k e^{2 pi i jk/N}.
std::vector<Complex> synthesize(std::span<const Complex> coeffs);

/// Signed frequency stored at FFT-order index k of a length-N transform.
inline long frequency(std::size_t k, std::size_t n) {
  return k < n / 2 ? static_cast<long>(k) : static_cast<long>(k) - static_cast<long>(n);
}

/// Spectral derivative d/dt of 2pi-periodic samples. The Nyquist mode is dropped.
std::vector<Complex> differentiate(std::span<const Complex> samples);

}  // namespace hqmap::fourier
