#pragma once

// In-place radix-2 FFT plus Bluestein's chirp transform for arbitrary sizes
// (the U^2 fast path needs DFTs of odd length N' = 2N+1).

#include <complex>
#include <cstddef>
#include <vector>

namespace phaselab {

// in-place FFT, n a power of two; inverse scales by 1/n
void fft_pow2(std::vector<std::complex<double>>& a, bool inverse);

// arbitrary-length DFT: X[k] = sum_j x[j] e(-2 pi i jk / n)
std::vector<std::complex<double>> dft(const std::vector<std::complex<double>>& x);

}  // namespace phaselab
