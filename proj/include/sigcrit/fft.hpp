#pragma once

#include <complex>
#include <span>

namespace sigcrit::fft {

/// In-place DFT, X_b = sum_j x_j exp(-+ 2 pi i b j / N), backed by FFTW.
/// The inverse direction flips the exponent sign; neither direction normalizes.
/// Lengths must be powers of two.
void transform(std::span<std::complex<double>> x, bool inverse = false);
void transform(std::span<std::complex<long double>> x, bool inverse = false);

}  // namespace sigcrit::fft
