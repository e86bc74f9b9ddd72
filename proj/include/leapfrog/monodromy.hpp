#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "leapfrog/pointvortex.hpp"

namespace lf::monodromy {

using cplx = std::complex<double>;
using Mat4 = std::array<cplx, 16>; // row-major 4x4

struct NearSingularMonodromy : std::runtime_error {
    using std::runtime_error::runtime_error;
};

Mat4 mat_identity();
Mat4 mat_mul(const Mat4& a, const Mat4& b);
cplx mat_det(Mat4 a);
Mat4 mat_inverse(Mat4 a);
double mat_frobenius(const Mat4& a);
std::array<cplx, 4> mat_apply(const Mat4& a, const std::array<cplx, 4>& v);

// Coefficients of the degenerate mode-one system on the orbit grid.
// rho2 and rho4 carry the sign convention under which the xi0 -> 0 limit is
// (i, -i/4, 0, i/2) and the fundamental matrix converges to exp(phi A0).
struct ModeOneSystem {
    double eps = 0.0;
    double c2 = 0.0; // constant-coefficient correction, default 0
    lf::pointvortex::VortexParams params;
    lf::pointvortex::PolarOrbit orbit;
    std::vector<cplx> rho1, rho2, rho3, rho4; // over the phi grid
};

// rho coefficients from the instantaneous (q, Theta) at angle phi
std::array<cplx, 4> rho_at(double q, double theta, double phi, double y0, double omega0,
                           double eps, double c2);

// 4x4 periodic coefficient matrix; rows 3,4 use the pi-shifted slice, which
// the two-fold orbit symmetry gives as (q, Theta + pi) at the same phi
Mat4 mode_one_matrix(double q, double theta, double phi, double y0, double omega0,
                     double eps, double c2);

ModeOneSystem build_system(double eps, const lf::pointvortex::VortexParams& p,
                           const lf::pointvortex::PolarOrbit& orbit, double c2 = 0.0);

// Constant limit matrix A0 and its closed-form exponential
Mat4 a0_matrix();
Mat4 a0_exponential(double phi);                       // trigonometric entries
double a0_det_gap_identity(double phi);                // 16 sin^2 sin^2 identity
Mat4 a0_exponential_ode(double phi, double tol = 1e-12); // matrix-ODE route

struct MonodromyReport {
    Mat4 M;                  // M(2pi, 0)
    cplx det_gap;            // det(M - Id)
    bool structure_ok = false;
    double structure_defect = 0.0;
};

MonodromyReport fundamental_matrix(const ModeOneSystem& sys, double tol = 1e-12);

// det(M0(2pi) - Id) at eps = 0 directly from the parameters
double det_gap_at(double y0, double xi0, double eps = 0.0, double c2 = 0.0,
                  double tol = 1e-11);

struct SingularRoot {
    double xi0;
    double slope; // d det_gap / d xi0 at the root
};

// zeros of xi0 -> det(M0(2pi)-Id) on [lo, hi], bracketing at the given grid
// resolution plus bisection refinement
std::vector<SingularRoot> singular_scan(double y0, double lo, double hi,
                                        double grid_step = 1e-3);

struct ModeOneSolution {
    std::array<cplx, 4> H0;
    std::vector<std::array<cplx, 4>> H; // over the orbit phi grid
    double periodicity_gap = 0.0;       // |H(2pi) - H(0)| / max(1, |H(0)|)
    double residual = 0.0;              // back-substitution sup over the grid
};

// Unique periodic solution of dH/dphi = A H + eps^{-2} G with forcing built
// from the scalar array g1 over the orbit grid. Refuses when xi0 lies within
// sigma of a supplied singular root or the det gap is tiny.
ModeOneSolution solve_mode_one(const ModeOneSystem& sys, const std::vector<cplx>& g1,
                               double sigma = 1e-3,
                               const std::vector<double>& singular_roots = {},
                               double tol = 1e-12);

// Fourier multiplier mu_{j,k} = j(1/2 - eps^2(omega0 - eps c2)) - (k-1)/2 sign(j)
double mu_jk(int j, int k, double eps, double omega0, double c2 = 0.0);

struct DivisorResult {
    double value;
    bool excluded;
};

// Diophantine check |eps^2 omega l + mu_{j,k}| >= radius_factor*lambda/|j|^tau
// with lambda = eps^{2+delta}
DivisorResult divisor(int j, int l, const lf::pointvortex::VortexParams& p, double delta,
                      double tau, int k = 2, double c2 = 0.0, double radius_factor = 2.0);

struct ExcludedInterval {
    int l, j, k;
    double lo, hi;
};

struct DivisorScan {
    double eps, delta, tau, lambda;
    double radius_factor = 2.0;
    std::vector<ExcludedInterval> excluded; // individual records, capped
    std::size_t interval_count = 0;         // true resonant-cell count
    double measure = 0.0;                   // Lebesgue measure of the union
    double sigma_measure = 0.0;             // part contributed by S-neighborhoods
    bool truncation_warning = false;
};

// Excluded-parameter measure over [xi_lo, xi_hi] for both multiplier families
// (k=1 from |j|>=1, k=2 from |j|>=2), using the monotone frequency map and
// interval arithmetic; optionally unioned with sigma-neighborhoods of roots.
DivisorScan cantor_measure(double y0, double eps, double delta, double tau, double xi_lo,
                           double xi_hi, int j_max = 512, int l_max = 0,
                           std::size_t omega_grid = 4096, double radius_factor = 2.0,
                           double c2 = 0.0, double sigma = 0.0,
                           const std::vector<double>& singular_roots = {});

} // namespace lf::monodromy
