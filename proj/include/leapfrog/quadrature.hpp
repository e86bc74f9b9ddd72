#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

namespace lf::numerics {

// Gauss-Legendre nodes and weights on [a, b], Newton iteration on the
// Legendre recurrence.
struct GaussLegendre {
    std::vector<double> x;
    std::vector<double> w;

    GaussLegendre(std::size_t n, double a, double b) : x(n), w(n) {
        const double eps = 1e-15;
        const std::size_t m = (n + 1) / 2;
        const double xm = 0.5 * (b + a);
        const double xl = 0.5 * (b - a);
        for (std::size_t i = 0; i < m; ++i) {
            double z = std::cos(M_PI * (static_cast<double>(i) + 0.75) /
                                (static_cast<double>(n) + 0.5));
            double pp = 0.0, z1 = 0.0;
            do {
                double p1 = 1.0, p2 = 0.0;
                for (std::size_t j = 0; j < n; ++j) {
                    const double p3 = p2;
                    p2 = p1;
                    p1 = ((2.0 * j + 1.0) * z * p2 - static_cast<double>(j) * p3) /
                         (static_cast<double>(j) + 1.0);
                }
                pp = static_cast<double>(n) * (z * p1 - p2) / (z * z - 1.0);
                z1 = z;
                z = z1 - p1 / pp;
            } while (std::abs(z - z1) > eps);
            x[i] = xm - xl * z;
            x[n - 1 - i] = xm + xl * z;
            w[i] = 2.0 * xl / ((1.0 - z * z) * pp * pp);
            w[n - 1 - i] = w[i];
        }
    }

    template <class F>
    double integrate(F&& f) const {
        double s = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) s += w[i] * f(x[i]);
        return s;
    }
};

} // namespace lf::numerics
