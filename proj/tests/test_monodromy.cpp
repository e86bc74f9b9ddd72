#include <doctest.h>

#include <cmath>

#include "leapfrog/monodromy.hpp"

using namespace lf::monodromy;
using lf::pointvortex::VortexParams;

TEST_CASE("closed-form exponential against the matrix ODE") {
    const auto I4 = mat_identity();
    const auto E0 = a0_exponential(0.0);
    for (int i = 0; i < 16; ++i) CHECK(std::abs(E0[i] - I4[i]) < 1e-14);
    CHECK(a0_det_gap_identity(0.0) == doctest::Approx(0.0));

    for (double phi : {M_PI / 2, M_PI, 1.5 * M_PI, 2.0 * M_PI}) {
        const auto Etrig = a0_exponential(phi);
        const auto Eode = a0_exponential_ode(phi, 1e-13);
        for (int i = 0; i < 16; ++i) CHECK(std::abs(Etrig[i] - Eode[i]) < 1e-10);
        auto gap = Eode;
        for (int i = 0; i < 4; ++i) gap[i * 4 + i] -= 1.0;
        CHECK(std::abs(mat_det(gap).real() - a0_det_gap_identity(phi)) < 1e-8);
        CHECK(std::abs(mat_det(gap).imag()) < 1e-9);
    }
}

TEST_CASE("trig entries satisfy the generator equation") {
    const auto A = a0_matrix();
    const double phi = 1.0, h = 1e-5;
    const auto Ep = a0_exponential(phi + h);
    const auto Em = a0_exponential(phi - h);
    const auto AE = mat_mul(A, a0_exponential(phi));
    for (int i = 0; i < 16; ++i)
        CHECK(std::abs((Ep[i] - Em[i]) / (2.0 * h) - AE[i]) < 1e-8);
}

TEST_CASE("paper det gap value at 2pi") {
    CHECK(std::abs(a0_det_gap_identity(2.0 * M_PI) - 0.121262) < 2e-3);
}

TEST_CASE("rho coefficients approach the constant limit") {
    for (double xi0 : {0.05, 0.025}) {
        const VortexParams p{1.0, xi0, 0.0};
        const auto orbit = lf::pointvortex::solve_q_theta(p, 64);
        const auto sys = build_system(0.0, p, orbit);
        double d1 = 0, d2 = 0, d3 = 0, d4 = 0;
        for (std::size_t k = 0; k < orbit.n_phi; ++k) {
            d1 = std::max(d1, std::abs(sys.rho1[k] - cplx(0.0, 1.0)));
            d2 = std::max(d2, std::abs(sys.rho2[k] - cplx(0.0, -0.25)));
            d3 = std::max(d3, std::abs(sys.rho3[k]));
            d4 = std::max(d4, std::abs(sys.rho4[k] - cplx(0.0, 0.5)));
        }
        const double cap = 25.0 * xi0 * xi0;
        CHECK(d1 < cap);
        CHECK(d2 < cap);
        CHECK(d3 < cap);
        CHECK(d4 < cap);
    }
}

TEST_CASE("coefficient arrays are 2pi periodic") {
    const VortexParams p{1.0, 0.4, 0.0};
    const auto orbit = lf::pointvortex::solve_q_theta(p, 64);
    const auto qe = orbit.q_theta_at(2.0 * M_PI);
    const auto rho_end = rho_at(qe[0], qe[1], 2.0 * M_PI, 1.0, orbit.omega0, 0.0, 0.0);
    const auto rho_begin =
        rho_at(orbit.q[0], orbit.theta_big[0], 0.0, 1.0, orbit.omega0, 0.0, 0.0);
    for (int i = 0; i < 4; ++i) CHECK(std::abs(rho_end[i] - rho_begin[i]) < 1e-8);
}

TEST_CASE("coefficient matrix carries the conjugation layout") {
    const VortexParams p{1.0, 0.4, 0.0};
    const auto orbit = lf::pointvortex::solve_q_theta(p, 64);
    const auto A = mode_one_matrix(orbit.q[5], orbit.theta_big[5],
                                   2.0 * M_PI * 5.0 / 64.0, 1.0, orbit.omega0, 0.0, 0.0);
    CHECK(std::abs(A[4] - std::conj(A[1])) < 1e-14);
    CHECK(std::abs(A[5] - std::conj(A[0])) < 1e-14);
    CHECK(std::abs(A[6] - std::conj(A[3])) < 1e-14);
    CHECK(std::abs(A[7] - std::conj(A[2])) < 1e-14);
    CHECK(std::abs(A[12] - std::conj(A[9])) < 1e-14);
    CHECK(std::abs(A[15] - std::conj(A[8 + 2])) < 1e-14);
}

TEST_CASE("fundamental matrix structure and perturbation rate") {
    const auto E = a0_exponential(2.0 * M_PI);
    double prev_ratio = -1.0;
    for (double xi0 : {0.1, 0.05}) {
        const VortexParams p{1.0, xi0, 0.0};
        const auto orbit = lf::pointvortex::solve_q_theta(p, 64);
        const auto rep = fundamental_matrix(build_system(0.0, p, orbit), 1e-12);
        CHECK(rep.structure_ok);
        CHECK(std::abs(rep.det_gap.imag()) < 1e-10);
        auto diff = rep.M;
        for (int i = 0; i < 16; ++i) diff[i] -= E[i];
        const double ratio = mat_frobenius(diff) / (xi0 * xi0);
        if (prev_ratio > 0.0) CHECK(ratio < 4.0 * prev_ratio);
        if (prev_ratio > 0.0) CHECK(prev_ratio < 4.0 * ratio);
        prev_ratio = ratio;
    }
}

TEST_CASE("det gap approaches the constant-limit value near the origin") {
    CHECK(std::abs(det_gap_at(1.0, 0.03) - 0.121262) < 5e-3);
}

TEST_CASE("singular scan is stable under grid refinement") {
    const auto coarse = singular_scan(1.0, 0.30, 0.40, 2e-3);
    const auto fine = singular_scan(1.0, 0.30, 0.40, 1e-3);
    CHECK(coarse.size() == fine.size());
    for (std::size_t i = 0; i < coarse.size(); ++i)
        CHECK(std::abs(coarse[i].xi0 - fine[i].xi0) < 1e-6);
}

TEST_CASE("mode-one solver") {
    const VortexParams p{1.0, 0.5, 0.1};
    const auto orbit = lf::pointvortex::solve_q_theta(p, 128);
    const auto sys = build_system(0.1, p, orbit);

    SUBCASE("zero forcing gives the zero solution") {
        const std::vector<cplx> g1(orbit.n_phi, cplx(0.0, 0.0));
        const auto sol = solve_mode_one(sys, g1, 1e-3, {}, 1e-12);
        for (const auto& h : sol.H)
            for (const auto& v : h) CHECK(std::abs(v) < 1e-10);
    }
    SUBCASE("smooth forcing: residual, periodicity, conjugation") {
        std::vector<cplx> g1(orbit.n_phi);
        for (std::size_t k = 0; k < orbit.n_phi; ++k) {
            const double phi = 2.0 * M_PI * double(k) / double(orbit.n_phi);
            g1[k] = cplx(0.3 * std::cos(phi) + 0.1, 0.2 * std::sin(2.0 * phi));
        }
        const auto sol = solve_mode_one(sys, g1, 1e-3, {}, 1e-12);
        CHECK(sol.residual < 1e-8);
        CHECK(sol.periodicity_gap < 1e-8);
        for (const auto& h : sol.H) {
            CHECK(std::abs(h[1] - std::conj(h[0])) < 1e-8);
            CHECK(std::abs(h[3] - std::conj(h[2])) < 1e-8);
        }
    }
    SUBCASE("shooting oracle confirms the periodic solution") {
        std::vector<cplx> g1(orbit.n_phi);
        for (std::size_t k = 0; k < orbit.n_phi; ++k) {
            const double phi = 2.0 * M_PI * double(k) / double(orbit.n_phi);
            g1[k] = cplx(std::cos(phi), -0.4 * std::sin(phi));
        }
        const auto sol1 = solve_mode_one(sys, g1, 1e-3, {}, 1e-12);
        const auto sol2 = solve_mode_one(sys, g1, 1e-3, {}, 1e-10);
        for (int i = 0; i < 4; ++i) CHECK(std::abs(sol1.H0[i] - sol2.H0[i]) < 1e-7);
    }
    SUBCASE("refusal near the singular set") {
        const std::vector<cplx> g1(orbit.n_phi, cplx(1.0, 0.0));
        CHECK_THROWS_AS(solve_mode_one(sys, g1, 1e-2, {0.505}, 1e-12),
                        NearSingularMonodromy);
    }
}

TEST_CASE("divisor values at eps -> 0") {
    CHECK(mu_jk(2, 2, 0.0, 3.0, 0.0) == doctest::Approx(0.5));
    CHECK(mu_jk(-3, 2, 0.0, 3.0, 0.0) == doctest::Approx(-1.0));
    // with the eps = 0 floor |mu| >= 1/2, nothing is excluded once the
    // radius stays below 1/2
    const double lambda = 0.4;
    for (int j = -1000; j <= 1000; ++j) {
        if (std::abs(j) < 2) continue;
        const double mu = mu_jk(j, 2, 0.0, 7.3, 0.0);
        CHECK(std::abs(mu) >= 0.5 - 1e-12);
        CHECK(std::abs(mu) >= lambda / std::pow(std::abs(j), 1.5));
    }
    const VortexParams p{1.0, 0.3, 0.05};
    const auto res = divisor(2, 0, p, 0.3, 1.5);
    CHECK(res.value == doctest::Approx(mu_jk(2, 2, 0.05,
                                             2.0 * M_PI / lf::pointvortex::period_quadrature(p),
                                             0.0)));
    CHECK_THROWS_AS(divisor(1, 0, p, 0.3, 1.5, 2), std::invalid_argument);
}

TEST_CASE("cantor measure basics") {
    const auto scan = cantor_measure(1.0, 0.1, 0.3, 1.5, 0.12, 0.18, 64);
    CHECK(scan.measure >= 0.0);
    CHECK(scan.measure <= 0.06 + 1e-12);
    CHECK(scan.lambda == doctest::Approx(std::pow(0.1, 2.3)));

    // interval count grows at most linearly in the l truncation
    const auto half = cantor_measure(1.0, 0.1, 0.3, 1.5, 0.12, 0.18, 64, 400);
    const auto full = cantor_measure(1.0, 0.1, 0.3, 1.5, 0.12, 0.18, 64, 800);
    CHECK(full.interval_count <= 2 * half.interval_count + 64);
    CHECK(scan.interval_count == scan.excluded.size());

    const auto s1 = cantor_measure(1.0, 0.05, 0.3, 1.5, 0.12, 0.18, 64);
    CHECK(s1.measure < scan.measure);

    // a crude j truncation leaves a tail above the 10% reporting threshold;
    // the acceptance resolution does not
    const auto crude = cantor_measure(1.0, 0.1, 0.3, 1.5, 0.12, 0.18, 8);
    CHECK(crude.truncation_warning);
    const auto fine = cantor_measure(1.0, 0.1, 0.3, 1.5, 0.12, 0.18, 128);
    CHECK_FALSE(fine.truncation_warning);
}
