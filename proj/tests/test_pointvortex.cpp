#include <doctest.h>

#include <cmath>

#include "leapfrog/pointvortex.hpp"

using namespace lf::pointvortex;

TEST_CASE("pair_rhs matches the reduced system by hand") {
    const VortexParams p{1.0, 0.5, 0.0};
    // (eta=0, xi=1/2, y0=1): deta = -(1/2)(1+0)/((1/4)(3/4)) = -8/3
    const auto d = pair_rhs({0.0, 0.5, 0.0, 0.0}, p);
    CHECK(d[0] == doctest::Approx(-8.0 / 3.0).epsilon(1e-15));
    CHECK(d[1] == doctest::Approx(0.0));

    // on the horizontal axis the field is vertical
    const double es = eta_quarter(p);
    const auto dq = pair_rhs({es, 0.0, 0.0, 0.0}, p);
    CHECK(dq[0] == doctest::Approx(0.0));
    CHECK(dq[1] > 0.0);

    CHECK_THROWS_AS(pair_rhs({0.0, 1.0, 0.0, 0.0}, p), SingularConfiguration);
    CHECK_THROWS_AS(pair_rhs({0.0, 0.0, 0.0, 0.0}, p), SingularConfiguration);
}

TEST_CASE("hamiltonian values and symmetry") {
    CHECK(hamiltonian(0.0, 0.5, 1.0) == doctest::Approx(0.5 * std::log(3.0)).epsilon(1e-15));
    CHECK(hamiltonian(0.3, 0.2, 1.0) == doctest::Approx(hamiltonian(-0.3, -0.2, 1.0)));
    CHECK_THROWS_AS(hamiltonian(0.0, 2.0, 1.0), std::domain_error);
}

TEST_CASE("gradient orthogonality of the flow") {
    const VortexParams p{1.0, 0.5, 0.0};
    const double h = 1e-6;
    for (double eta : {0.1, 0.3, -0.2})
        for (double xi : {0.2, 0.4}) {
            const auto d = pair_rhs({eta, xi, 0.0, 0.0}, p);
            const double dHe =
                (hamiltonian(eta + h, xi, 1.0) - hamiltonian(eta - h, xi, 1.0)) / (2 * h);
            const double dHx =
                (hamiltonian(eta, xi + h, 1.0) - hamiltonian(eta, xi - h, 1.0)) / (2 * h);
            CHECK(std::abs(dHe * d[0] + dHx * d[1]) < 1e-8);
        }
}

TEST_CASE("orbit conservation, closure and membership") {
    const VortexParams p{1.0, 0.5, 0.0};
    const double T = period_quadrature(p);
    const double tol = 1e-12;
    const auto orbit = integrate_orbit(p, T, tol, 257);
    CHECK(orbit.hamiltonian_drift <= 100.0 * tol);
    const auto end = orbit.state_at(T);
    CHECK(std::hypot(end.eta, end.xi - p.xi0) < 1e-6);
    for (const auto& s : orbit.samples)
        CHECK(std::abs(orbit_set_residual(s.eta, s.xi, p)) < 1e-8);
    // half-period antisymmetry
    for (double t : {0.1 * T, 0.2 * T, 0.37 * T}) {
        const auto a = orbit.state_at(t);
        const auto b = orbit.state_at(t + 0.5 * T);
        CHECK(std::abs(a.eta + b.eta) < 1e-8);
        CHECK(std::abs(a.xi + b.xi) < 1e-8);
    }
    // quarter period on the horizontal axis
    const auto q = orbit.state_at(0.25 * T);
    CHECK(std::abs(q.xi) < 1e-8);
    CHECK(std::abs(std::abs(q.eta) - eta_quarter(p)) < 1e-8 * eta_quarter(p));
}

TEST_CASE("period bracket and limits") {
    const VortexParams p{1.0, 0.1, 0.0};
    const double T = period_quadrature(p);
    const double lo = 2.0 * M_PI * 0.01;
    CHECK(T >= lo);
    CHECK(T <= lo / (1.0 - 2.0 * p.alpha0()));
    const double T_small = period_quadrature({1.0, 0.01, 0.0});
    CHECK(std::abs(T_small / (2.0 * M_PI * 1e-4) - 1.0) < 5e-3);
}

TEST_CASE("three period routes agree") {
    for (double xi0 : {0.1, 0.3, 0.5, 0.6}) {
        const VortexParams p{1.0, xi0, 0.0};
        const double Tq = period_quadrature(p);
        const double Tn = period_numeric(p, 1e-12);
        const double Tc = period_closed_form(p, /*self_check=*/true);
        CHECK(std::abs(Tq - Tn) / Tq < 1e-6);
        CHECK(std::abs(Tc - Tq) / Tq < 1e-8);
    }
    CHECK_THROWS_AS(period_numeric({1.0, 0.75, 0.0}, 1e-12), std::invalid_argument);
}

TEST_CASE("eta_quarter value and limit") {
    const VortexParams p{1.0, 0.5, 0.0};
    CHECK(eta_quarter(p) == doctest::Approx(std::sqrt(0.5)).epsilon(1e-15));
    const double xs = 1e-3;
    CHECK(eta_quarter({1.0, xs, 0.0}) == doctest::Approx(xs).epsilon(1e-5));
}

TEST_CASE("frequency profile is strictly decreasing") {
    const auto rows = frequency_profile(1.0, 0.1, 0.6, 11);
    for (std::size_t i = 0; i + 1 < rows.size(); ++i)
        CHECK(rows[i + 1].omega0 < rows[i].omega0);
    for (const auto& r : rows) CHECK(r.domega < 0.0);
    // omega ~ 1/xi0^2 toward the origin
    const auto small = frequency_profile(1.0, 0.02, 0.05, 2);
    CHECK(small[0].omega0 == doctest::Approx(1.0 / (0.02 * 0.02)).epsilon(0.01));
}

TEST_CASE("polar orbit invariants") {
    const VortexParams p{1.0, 0.5, 0.0};
    const auto orb = solve_q_theta(p, 128);
    CHECK(orb.q[0] == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(orb.theta_big[0] == doctest::Approx(M_PI / 2).epsilon(1e-12));
    const auto wrap = orb.q_theta_at(2.0 * M_PI);
    CHECK(std::abs(wrap[1] - M_PI / 2 - 2.0 * M_PI) < 1e-8);
    for (std::size_t k = 0; k < 64; ++k) {
        CHECK(orb.q[k] > 0.0);
        CHECK(orb.q[k + 64] == doctest::Approx(orb.q[k]).epsilon(1e-7));
        CHECK(std::abs(orb.theta_big[k + 64] - orb.theta_big[k] - M_PI) < 1e-7);
    }
    // the stated uniform bounds, in phi units after dividing by omega0
    const double a0 = p.alpha0();
    const double bound = 6.0 * M_PI / (1.0 - 2.0 * a0) *
                         std::exp(6.0 * M_PI * a0 / (1.0 - 2.0 * a0));
    for (std::size_t k = 0; k < orb.n_phi; ++k) {
        CHECK(std::abs(orb.theta_dot[k] - 1.0) <= bound / orb.omega0);
        CHECK(std::abs(1.0 / orb.q[k] - 1.0 / (p.xi0 * p.xi0)) <= bound);
    }
    CHECK_THROWS_AS(solve_q_theta(p, 100), std::invalid_argument);
}

TEST_CASE("action-angle lift advances by 2pi per period") {
    const VortexParams p{1.0, 0.5, 0.0};
    const double T = period_quadrature(p);
    const auto orbit = integrate_orbit(p, T, 1e-12, 257);
    double angle = M_PI / 2.0;
    double action0 = 0.0;
    for (std::size_t k = 0; k < orbit.samples.size(); ++k) {
        const auto& s = orbit.samples[k];
        const auto aa = ActionAngleState::from_pair({s.eta, s.xi, s.x0, s.t}, angle);
        CHECK(aa.action > 0.0);
        if (k == 0) action0 = aa.action;
        angle = aa.angle;
    }
    const auto& last = orbit.samples.back();
    const auto aa_end = ActionAngleState::from_pair({last.eta, last.xi, last.x0, last.t}, angle);
    CHECK(std::abs(aa_end.angle - M_PI / 2.0 - 2.0 * M_PI) < 1e-6);
    CHECK(std::abs(aa_end.action - action0) < 1e-9);
}

TEST_CASE("parameter validation") {
    CHECK_THROWS_AS((VortexParams{1.0, 0.8, 0.0}.validate()), std::invalid_argument);
    CHECK_THROWS_AS((VortexParams{1.0, 0.5, 1.5}.validate()), std::invalid_argument);
    CHECK_THROWS_AS((VortexParams{-1.0, 0.5, 0.0}.validate()), std::invalid_argument);
}
