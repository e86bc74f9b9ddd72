#include "leapfrog/pointvortex.hpp"

#include <cmath>

#include "leapfrog/elliptic.hpp"
#include "leapfrog/fft.hpp"
#include "leapfrog/quadrature.hpp"

namespace lf::pointvortex {

using lf::numerics::DenseSolution;
using lf::numerics::OdeOptions;

void VortexParams::validate() const {
    if (!(y0 > 0.0)) throw std::invalid_argument("VortexParams: y0 must be positive");
    if (!(xi0 > 0.0) || !(xi0 < y0 / std::sqrt(2.0)))
        throw std::invalid_argument(
            "VortexParams: xi0 must lie strictly inside (0, y0/sqrt(2))");
    if (!(eps >= 0.0) || !(eps < 1.0))
        throw std::invalid_argument("VortexParams: eps must lie in [0,1)");
}

ActionAngleState ActionAngleState::from_pair(const PairState& s, double previous_angle) {
    ActionAngleState a;
    a.action = s.eta * s.eta + s.xi * s.xi;
    if (!(a.action > 0.0))
        throw SingularConfiguration("ActionAngleState: zero pair separation");
    double raw = std::atan2(s.xi, s.eta);
    while (raw - previous_angle > M_PI) raw -= 2.0 * M_PI;
    while (raw - previous_angle < -M_PI) raw += 2.0 * M_PI;
    a.angle = raw;
    return a;
}

std::array<double, 3> pair_rhs(const PairState& s, const VortexParams& p) {
    const double y2 = p.y0 * p.y0;
    const double xi2 = s.xi * s.xi, eta2 = s.eta * s.eta;
    if (xi2 >= y2 || (xi2 + eta2) == 0.0)
        throw SingularConfiguration("pair_rhs: vortex collision configuration");
    const double r2 = xi2 + eta2;
    const double deta = -s.xi * (y2 + eta2) / (r2 * (y2 - xi2));
    const double dxi = s.eta * (y2 - xi2) / (r2 * (y2 + eta2));
    const double dx0 = p.y0 * (1.0 / (y2 + eta2) + 1.0 / (y2 - xi2));
    return {deta, dxi, dx0};
}

double hamiltonian(double eta, double xi, double y0) {
    const double y2 = y0 * y0;
    const double arg = 1.0 / (y2 - xi * xi) - 1.0 / (y2 + eta * eta);
    if (!(y2 > xi * xi) || !(arg > 0.0))
        throw std::domain_error("hamiltonian: log argument not positive");
    return -0.5 * std::log(arg);
}

double orbit_set_residual(double eta, double xi, const VortexParams& p) {
    const double y2 = p.y0 * p.y0;
    const double c = y2 * y2 / (p.xi0 * p.xi0);
    const double rhs = y2 * y2 * (y2 / (p.xi0 * p.xi0) - 1.0) *
                       (y2 / (p.xi0 * p.xi0) - 1.0);
    const double lhs = (eta * eta + c) * (xi * xi + c - 2.0 * y2);
    return (lhs - rhs) / rhs;
}

PairState Orbit::state_at(double t) const {
    const auto y = dense.eval(t);
    return {y[0], y[1], y[2], t};
}

Orbit integrate_orbit(const VortexParams& p, double t_end, double tol,
                      std::size_t n_samples) {
    p.validate();
    Orbit orbit;
    const double H0 = hamiltonian(0.0, p.xi0, p.y0);
    auto rhs = [&p](double, const std::vector<double>& y, std::vector<double>& dy) {
        const auto d = pair_rhs({y[0], y[1], y[2], 0.0}, p);
        dy[0] = d[0];
        dy[1] = d[1];
        dy[2] = d[2];
    };
    OdeOptions opt;
    opt.rtol = tol;
    opt.atol = tol;
    numerics::ode_integrate(rhs, {0.0, p.xi0, 0.0}, 0.0, t_end, opt, &orbit.dense);
    orbit.samples.reserve(n_samples);
    double drift = 0.0;
    for (std::size_t k = 0; k < n_samples; ++k) {
        const double t = t_end * static_cast<double>(k) / static_cast<double>(n_samples - 1);
        const auto y = orbit.dense.eval(t);
        const double H = hamiltonian(y[0], y[1], p.y0);
        drift = std::max(drift, std::abs(H - H0) / std::abs(H0));
        orbit.samples.push_back({t, y[0], y[1], y[2], H});
    }
    orbit.hamiltonian_drift = drift;
    return orbit;
}

double eta_quarter(const VortexParams& p) {
    p.validate();
    const double den = p.y0 * p.y0 - 2.0 * p.xi0 * p.xi0;
    if (!(den > 0.0)) throw std::domain_error("eta_quarter: alpha0 >= 1/2");
    return p.xi0 * p.y0 / std::sqrt(den);
}

namespace {

double period_integrand(double a0, double s) {
    // K(alpha0, s) of the quarter-period integral, monotone in both arguments
    const double num = (1.0 - a0) * (1.0 - 2.0 * a0 + a0 * s) * (1.0 - 2.0 * a0 + a0 * s);
    const double den = (1.0 - 2.0 * a0) * std::pow(1.0 - 2.0 * a0 + a0 * a0 * s, 1.5);
    return num / den;
}

} // namespace

double period_quadrature(const VortexParams& p) {
    p.validate();
    const double a0 = p.alpha0();
    static const numerics::GaussLegendre gl(128, 0.0, M_PI / 2.0);
    // s = sin u removes the endpoint singularity of 1/sqrt(1-s^2)
    const double integral = gl.integrate([a0](double u) {
        const double s = std::sin(u);
        return period_integrand(a0, s * s);
    });
    return 4.0 * p.xi0 * p.xi0 * integral;
}

double period_closed_form(const VortexParams& p, bool self_check) {
    p.validate();
    const double a0 = p.alpha0();
    // Complete-elliptic argument alpha0/(1-alpha0) is the modulus k; the AGM
    // routines take the parameter m = k^2.
    const double k = a0 / (1.0 - a0);
    const double m = k * k;
    const double E = numerics::elliptic_E(m);
    const double K = numerics::elliptic_K(m);
    const double pre = 8.0 * p.xi0 * p.xi0 * (1.0 - a0) / (1.0 - 2.0 * a0);
    const double T = pre * ((1.0 - a0) * (1.0 - a0) / (a0 * a0) * E -
                            (1.0 - 2.0 * a0) / (a0 * a0) * K);
    if (self_check) {
        const double Tq = period_quadrature(p);
        if (std::abs(T - Tq) / Tq > 1e-8)
            throw ConventionMismatch("period_closed_form: elliptic convention self-check failed");
    }
    return T;
}

double period_numeric(const VortexParams& p, double tol) {
    p.validate();
    // quarter period <= pi*xi0^2 / (2(1-2alpha0)); integrate past it with margin
    const double horizon =
        1.5 * M_PI * p.xi0 * p.xi0 / (2.0 * (1.0 - 2.0 * p.alpha0())) + 1e-12;
    auto rhs = [&p](double, const std::vector<double>& y, std::vector<double>& dy) {
        const auto d = pair_rhs({y[0], y[1], y[2], 0.0}, p);
        dy[0] = d[0];
        dy[1] = d[1];
        dy[2] = d[2];
    };
    OdeOptions opt;
    opt.rtol = tol;
    opt.atol = tol;
    DenseSolution dense;
    numerics::ode_integrate(rhs, {0.0, p.xi0, 0.0}, 0.0, horizon, opt, &dense);
    double tq;
    try {
        tq = numerics::locate_event(
            dense, [](double, const std::vector<double>& y) { return y[1]; }, 1e-13);
    } catch (const numerics::OdeError&) {
        throw PeriodMismatch("period_numeric: no xi zero-crossing inside horizon");
    }
    return 4.0 * tq;
}

std::vector<FrequencyRow> frequency_profile(double y0, double xi_lo, double xi_hi,
                                            std::size_t n) {
    if (n < 2) throw std::invalid_argument("frequency_profile: need at least two nodes");
    std::vector<FrequencyRow> rows(n);
    const double dh = 1e-4 * y0;
    for (std::size_t k = 0; k < n; ++k) {
        const double xi0 =
            xi_lo + (xi_hi - xi_lo) * static_cast<double>(k) / static_cast<double>(n - 1);
        const VortexParams p{y0, xi0, 0.0};
        const double T = period_quadrature(p);
        const double wp = 2.0 * M_PI / period_quadrature({y0, xi0 + dh, 0.0});
        const double wm = 2.0 * M_PI / period_quadrature({y0, xi0 - dh, 0.0});
        rows[k] = {xi0, T, 2.0 * M_PI / T, (wp - wm) / (2.0 * dh)};
    }
    return rows;
}

std::array<double, 2> q_theta_rhs(double q, double theta, double y0, double omega0) {
    const double y2 = y0 * y0;
    const double st = std::sin(theta), ct = std::cos(theta);
    const double d1 = y2 - q * st * st;
    const double d2 = y2 + q * ct * ct;
    const double dq = -(1.0 / d1 + 1.0 / d2) * std::sin(2.0 * theta) * q / omega0;
    const double dth = (1.0 / q + st * st / d1 - ct * ct / d2) / omega0;
    return {dq, dth};
}

std::array<double, 2> PolarOrbit::q_theta_at(double phi) const {
    double ph = std::fmod(phi, 2.0 * M_PI);
    double lift = phi - ph;
    if (ph < 0.0) {
        ph += 2.0 * M_PI;
        lift -= 2.0 * M_PI;
    }
    const auto y = dense.eval(ph);
    return {y[0], y[1] + lift};
}

PolarOrbit solve_q_theta(const VortexParams& p, std::size_t n_phi, double tol) {
    p.validate();
    if (!numerics::is_power_of_two(n_phi) || n_phi < 64)
        throw std::invalid_argument("solve_q_theta: n_phi must be a power of two >= 64");
    PolarOrbit orb;
    orb.n_phi = n_phi;
    orb.y0 = p.y0;
    orb.xi0 = p.xi0;
    orb.period = period_quadrature(p);
    orb.omega0 = 2.0 * M_PI / orb.period;

    auto rhs = [&](double, const std::vector<double>& y, std::vector<double>& dy) {
        const auto d = q_theta_rhs(y[0], y[1], p.y0, orb.omega0);
        dy[0] = d[0];
        dy[1] = d[1];
    };
    OdeOptions opt;
    opt.rtol = tol;
    opt.atol = tol;
    numerics::ode_integrate(rhs, {p.xi0 * p.xi0, M_PI / 2.0}, 0.0, 2.0 * M_PI, opt,
                            &orb.dense);

    orb.q.resize(n_phi);
    orb.theta_big.resize(n_phi);
    orb.theta_dot.resize(n_phi);
    for (std::size_t k = 0; k < n_phi; ++k) {
        const double phi = 2.0 * M_PI * static_cast<double>(k) / static_cast<double>(n_phi);
        const auto y = orb.dense.eval(phi);
        orb.q[k] = y[0];
        orb.theta_big[k] = y[1];
        orb.theta_dot[k] = q_theta_rhs(y[0], y[1], p.y0, orb.omega0)[1];
        if (!(orb.q[k] > 0.0)) throw PeriodMismatch("solve_q_theta: q lost positivity");
    }

    const auto yend = orb.dense.eval(2.0 * M_PI);
    if (std::abs(yend[1] - M_PI / 2.0 - 2.0 * M_PI) > 1e-8)
        throw PeriodMismatch("solve_q_theta: Theta(2pi) - Theta(0) deviates from 2pi");
    // two-fold orbit symmetry q(phi+pi) = q(phi), Theta(phi+pi) = Theta(phi)+pi
    for (std::size_t k = 0; k < n_phi / 2; ++k) {
        if (std::abs(orb.q[k + n_phi / 2] - orb.q[k]) > 1e-7 * p.xi0 * p.xi0 ||
            std::abs(orb.theta_big[k + n_phi / 2] - orb.theta_big[k] - M_PI) > 1e-7)
            throw PeriodMismatch("solve_q_theta: two-fold symmetry violated");
    }
    return orb;
}

} // namespace lf::pointvortex
