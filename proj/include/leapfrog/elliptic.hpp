#pragma once

#include <stdexcept>

namespace lf::numerics {

// Complete elliptic integrals in the parameter convention,
//   K(m) = int_0^{pi/2} (1 - m sin^2 t)^{-1/2} dt,   m in [0, 1)
//   E(m) = int_0^{pi/2} (1 - m sin^2 t)^{ 1/2} dt,   m in [0, 1]
// computed by arithmetic-geometric mean iteration to ~1e-15 relative.
double elliptic_K(double m);
double elliptic_E(double m);

struct EllipticDomainError : std::domain_error {
    using std::domain_error::domain_error;
};

} // namespace lf::numerics
