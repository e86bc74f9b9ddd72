#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace lf::numerics {

using cplx = std::complex<double>;

bool is_power_of_two(std::size_t n);

// In-place radix-2 FFT. sign = -1: forward (e^{-i k x} analysis),
// sign = +1: inverse without the 1/n factor.
void fft_inplace(cplx* data, std::size_t n, int sign);

// Forward transform of n samples: c_k = (1/n) sum_j f_j e^{-2pi i jk/n},
// so that f_j = sum_k c_k e^{+2pi i jk/n}. Frequencies in FFT order
// (0, 1, ..., n/2-1, -n/2, ..., -1).
void fft_forward(std::vector<cplx>& a);
void fft_inverse(std::vector<cplx>& a);

// Signed wavenumber of FFT bin k for size n.
inline int fft_freq(std::size_t k, std::size_t n) {
    return (k < n / 2) ? static_cast<int>(k)
                       : static_cast<int>(k) - static_cast<int>(n);
}

} // namespace lf::numerics
