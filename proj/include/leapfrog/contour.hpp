#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "leapfrog/field.hpp"
#include "leapfrog/pointvortex.hpp"

namespace lf::contour {

using cplx = std::complex<double>;
using lf::numerics::BoundaryField;

struct ConvergenceMargin : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct RadiusPositivity : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct SimulationAbort : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Orbit-dependent geometry entering the boundary functional: the pole
// positions w3, w4 and the series coefficients a_k over the phi grid.
struct PatchGeometry {
    lf::pointvortex::PolarOrbit orbit;
    std::vector<cplx> w3, w4;            // w3 = i(sqrt(q) sin Theta + y0), w4 = sqrt(q) cos Theta + i y0
    std::vector<std::vector<cplx>> a_k;  // a_k[k-2][i], k = 2 .. k_max
    std::size_t k_max = 20;

    double y0() const { return orbit.y0; }
    double omega0() const { return orbit.omega0; }
    std::size_t n_phi() const { return orbit.n_phi; }
    // smallest pole distance min(|w3|, |w4|, sqrt(q)) over the grid
    double pole_margin() const;
};

PatchGeometry make_geometry(const lf::pointvortex::PolarOrbit& orbit,
                            std::size_t k_max = 20);

// g(phi,theta) = Re{ a_2(phi) e^{2 i theta} }, spatial modes +-2 only
BoundaryField g_field(const PatchGeometry& geom, std::size_t n_theta);

struct SeriesField {
    BoundaryField field;
    double tail_bound = 0.0; // geometric bound on the truncated remainder
};

// G(0) = sum_{k>=2} ((-eps)^k / 2) Im{ a_k(phi) e^{i k theta} }
SeriesField g0_series(double eps, const PatchGeometry& geom, std::size_t n_theta);

struct PsiOptions {
    std::size_t n_l = 64; // Gauss-Legendre nodes in the radial direction
};

// Psi_n(eps, r) sampled on the (n_phi x n_theta) grid of r; n in 1..4.
// Psi_1 integrates the log kernel in closed form radially; Psi_2..4 use
// tensor quadrature (trapezoid in eta matching the theta grid, GL in l).
std::vector<double> psi_eval(int n, double eps, const BoundaryField& r,
                             const PatchGeometry& geom, const PsiOptions& opt = {});

// d/dtheta of Psi_1 through the boundary-integral identity
// 2 dPsi/dzbar = (i/2pi) oint log|z - w| dw, desingularized spectrally.
std::vector<double> dtheta_psi1(double eps, const BoundaryField& r,
                                const PatchGeometry& geom);

// sum_n d_theta Psi_n(eps, r); the n>=2 terms differentiated spectrally
BoundaryField sum_dtheta_psi(double eps, const BoundaryField& r,
                             const PatchGeometry& geom, const PsiOptions& opt = {});

// G(r) = eps^3 omega0 (d_phi r - Theta_dot d_theta r) + sum_n d_theta Psi_n
BoundaryField G_residual(double eps, const BoundaryField& r, const PatchGeometry& geom,
                         const PsiOptions& opt = {});

// leading terms of the linearization at state r applied to a direction h:
// eps^3 omega0 d_phi h + eps d_theta[(1/2 - eps r/2 - eps^2 omega0 Theta_dot
// - eps^2 g/2) h] - (eps/2) H[h]
BoundaryField linearized_leading(double eps, const BoundaryField& r,
                                 const BoundaryField& h, const PatchGeometry& geom);

// r_eps = r0 + eps r1 with r0 = g + eps B0 and r1 from the elliptic solve
// against the forcing A1 = omega0 (d_phi g - d_theta(Theta_dot g)) -
// (3/4) d_theta g^2
BoundaryField approx_solution(double eps, const PatchGeometry& geom);

// --- full four-patch evolution -------------------------------------------

struct SimulationOptions {
    std::size_t n_nodes = 128;   // boundary nodes per patch (power of two)
    double cfl = 0.25;           // dt <= cfl * min spacing / max speed
    int redistribute_every = 10; // arclength reparametrization cadence
    std::size_t n_snapshots = 64;
    double area_abort = 0.01;    // relative area drift that aborts the run
    double tol_orbit = 1e-12;    // point-vortex reference tolerance
};

struct PatchSnapshot {
    double t = 0.0;
    std::array<std::vector<cplx>, 2> boundary; // upper patches, physical plane
    std::array<cplx, 2> centroid{};
    std::array<double, 2> area{};
    std::array<double, 2> mode2{};             // |mode-2| of the scaled radius
    std::array<cplx, 2> z_ref{};               // point-vortex positions z_1, z_2
};

struct PatchTrajectory {
    lf::pointvortex::VortexParams params;
    double period = 0.0;
    double eps = 0.0;
    std::vector<PatchSnapshot> snapshots;
    std::size_t steps_taken = 0;
};

PatchTrajectory simulate_patches(const lf::pointvortex::VortexParams& p,
                                 const BoundaryField& r_init, double t_end,
                                 const SimulationOptions& opt = {});

struct PatchDiagnostics {
    double max_centroid_error = 0.0;  // patch 1 vs z_1(t), sup over snapshots
    double max_area_drift = 0.0;      // relative, both patches
    int exchange_count = 0;           // sign changes of Re{c1 - c2}
    double mode2_initial = 0.0;       // measured at t = 0, patch 1
    double mode2_predicted = 0.0;     // eps^2 |a2(0)| / 2
    double symmetry_defect = 0.0;     // patch-2(t) vs patch-1(t + T/2) centroids
};

PatchDiagnostics patch_diagnostics(const PatchTrajectory& traj,
                                   const PatchGeometry& geom);

// area and centroid of a closed positively-oriented boundary
double polygon_area_spectral(const std::vector<cplx>& w);
cplx polygon_centroid_spectral(const std::vector<cplx>& w);

} // namespace lf::contour
