#include "leapfrog/fft.hpp"

#include <cmath>
#include <stdexcept>

namespace lf::numerics {

bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

void fft_inplace(cplx* a, std::size_t n, int sign) {
    if (!is_power_of_two(n)) throw std::invalid_argument("fft: size must be a power of two");
    // bit reversal
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const double ang = sign * 2.0 * M_PI / static_cast<double>(len);
        const cplx wlen(std::cos(ang), std::sin(ang));
        for (std::size_t i = 0; i < n; i += len) {
            cplx w(1.0, 0.0);
            for (std::size_t k = 0; k < len / 2; ++k) {
                const cplx u = a[i + k];
                const cplx v = a[i + k + len / 2] * w;
                a[i + k] = u + v;
                a[i + k + len / 2] = u - v;
                w *= wlen;
            }
        }
    }
}

void fft_forward(std::vector<cplx>& a) {
    fft_inplace(a.data(), a.size(), -1);
    const double inv = 1.0 / static_cast<double>(a.size());
    for (auto& v : a) v *= inv;
}

void fft_inverse(std::vector<cplx>& a) { fft_inplace(a.data(), a.size(), +1); }

} // namespace lf::numerics
