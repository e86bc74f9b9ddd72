#include "leapfrog/elliptic.hpp"

#include <cmath>

namespace lf::numerics {

double elliptic_K(double m) {
    if (m < 0.0 || m >= 1.0) throw EllipticDomainError("elliptic_K: m outside [0,1)");
    double a = 1.0, b = std::sqrt(1.0 - m);
    for (int it = 0; it < 64 && std::abs(a - b) > 1e-15 * a; ++it) {
        const double an = 0.5 * (a + b);
        b = std::sqrt(a * b);
        a = an;
    }
    return M_PI / (2.0 * a);
}

double elliptic_E(double m) {
    if (m < 0.0 || m > 1.0) throw EllipticDomainError("elliptic_E: m outside [0,1]");
    if (m == 1.0) return 1.0;
    double a = 1.0, b = std::sqrt(1.0 - m), c = std::sqrt(m);
    double sum = 0.5 * c * c;
    double pow2 = 1.0; // 2^{n-1} with n starting at 1
    for (int it = 0; it < 64 && std::abs(c) > 1e-17; ++it) {
        const double an = 0.5 * (a + b);
        c = 0.5 * (a - b);
        b = std::sqrt(a * b);
        a = an;
        sum += pow2 * c * c;
        pow2 *= 2.0;
    }
    return M_PI / (2.0 * a) * (1.0 - sum);
}

} // namespace lf::numerics
