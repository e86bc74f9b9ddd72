#pragma once

#include <array>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "leapfrog/ode.hpp"

namespace lf::pointvortex {

struct SingularConfiguration : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct ConventionMismatch : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct PeriodMismatch : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Physical configuration of the symmetric quartet. The leapfrogging window
// is 0 < xi0 < y0/sqrt(2).
struct VortexParams {
    double y0 = 1.0;
    double xi0 = 0.5;
    double eps = 0.0;

    double alpha0() const { return xi0 * xi0 / (y0 * y0); }
    double h0() const { return y0 * y0 * (y0 * y0 / (xi0 * xi0) - 1.0); }
    void validate() const;
};

// Reduced state (eta, xi) = (Re, Im) of z1 - z2 and x0 = Re of z1 + z2.
struct PairState {
    double eta = 0.0;
    double xi = 0.0;
    double x0 = 0.0;
    double t = 0.0;
};

// Action-angle coordinates of the reduced motion: the action is the squared
// pair separation I = eta^2 + xi^2 and the angle its polar argument, so one
// period advances the angle by exactly 2 pi.
struct ActionAngleState {
    double action = 0.0;
    double angle = 0.0;

    // nearest continuous lift of the angle relative to a previous sample
    static ActionAngleState from_pair(const PairState& s, double previous_angle = M_PI / 2.0);
};

// (d eta/dt, d xi/dt, d x0/dt)
std::array<double, 3> pair_rhs(const PairState& s, const VortexParams& p);

double hamiltonian(double eta, double xi, double y0);

// residual of the orbit-membership algebraic relation, normalized by its
// right-hand side
double orbit_set_residual(double eta, double xi, const VortexParams& p);

struct OrbitSample {
    double t, eta, xi, x0, H;
};

struct Orbit {
    std::vector<OrbitSample> samples;
    lf::numerics::DenseSolution dense; // state layout (eta, xi, x0)
    double hamiltonian_drift = 0.0;    // max relative deviation from H(0, xi0)
    PairState state_at(double t) const;
};

// Integrates from (0, xi0, 0) over [0, t_end] at the given tolerance,
// sampling n_samples points uniformly in time.
Orbit integrate_orbit(const VortexParams& p, double t_end, double tol = 1e-12,
                      std::size_t n_samples = 257);

// Quarter-period horizontal gap xi0*y0/sqrt(y0^2 - 2 xi0^2).
double eta_quarter(const VortexParams& p);

// Period of the reduced orbit, three routes.
double period_quadrature(const VortexParams& p);                    // 128-node GL
double period_closed_form(const VortexParams& p, bool self_check = false);
double period_numeric(const VortexParams& p, double tol = 1e-12);   // event detection

struct FrequencyRow {
    double xi0, T, omega0, domega;
};

// Table of (xi0, T, omega0, d omega0/d xi0) over a uniform grid strictly
// inside (0, y0/sqrt(2)); derivative by central differences at 1e-4*y0.
std::vector<FrequencyRow> frequency_profile(double y0, double xi_lo, double xi_hi,
                                            std::size_t n);

// Periodic samples of the reduced orbit in polar form over one period,
// q = |z1-z2|^2 and Theta its continuously lifted argument, both as
// functions of the rescaled time phi = omega0 t on a uniform grid.
struct PolarOrbit {
    std::size_t n_phi = 0;
    double y0 = 0.0, xi0 = 0.0;
    double omega0 = 0.0, period = 0.0;
    std::vector<double> q;         // q(phi_k) > 0
    std::vector<double> theta_big; // Theta(phi_k), lifted
    std::vector<double> theta_dot; // d Theta / d phi
    lf::numerics::DenseSolution dense; // state (q, Theta) over phi in [0, 2pi]

    std::array<double, 2> q_theta_at(double phi) const; // 2pi-periodic lookup
};

// (q, Theta) right-hand side in phi units at frequency omega0
std::array<double, 2> q_theta_rhs(double q, double theta, double y0, double omega0);

PolarOrbit solve_q_theta(const VortexParams& p, std::size_t n_phi, double tol = 1e-12);

} // namespace lf::pointvortex
