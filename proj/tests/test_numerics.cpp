#include <doctest.h>

#include <cmath>
#include <complex>
#include <random>

#include "leapfrog/elliptic.hpp"
#include "leapfrog/field.hpp"
#include "leapfrog/ode.hpp"
#include "leapfrog/quadrature.hpp"

using namespace lf::numerics;

namespace {

std::vector<double> random_grid(std::size_t np, std::size_t nt, unsigned seed) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::vector<double> g(np * nt);
    for (auto& v : g) v = u(rng);
    return g;
}

} // namespace

TEST_CASE("complete elliptic integrals at degenerate moduli") {
    CHECK(elliptic_K(0.0) == doctest::Approx(M_PI / 2).epsilon(1e-15));
    CHECK(elliptic_E(0.0) == doctest::Approx(M_PI / 2).epsilon(1e-15));
    CHECK(elliptic_E(1.0) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK_THROWS_AS(elliptic_K(1.0), EllipticDomainError);
    CHECK_THROWS_AS(elliptic_E(-0.1), EllipticDomainError);
}

TEST_CASE("elliptic integrals against direct quadrature") {
    // oracle: 10^4-node Gauss-Legendre on the defining integrals
    const GaussLegendre gl(10000, 0.0, M_PI / 2.0);
    for (double m : {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9}) {
        const double Kref =
            gl.integrate([m](double t) { return 1.0 / std::sqrt(1.0 - m * std::sin(t) * std::sin(t)); });
        const double Eref =
            gl.integrate([m](double t) { return std::sqrt(1.0 - m * std::sin(t) * std::sin(t)); });
        CHECK(std::abs(elliptic_K(m) - Kref) < 1e-12 * Kref);
        CHECK(std::abs(elliptic_E(m) - Eref) < 1e-12 * Eref);
    }
}

TEST_CASE("field round trip and Parseval") {
    const std::size_t np = 32, nt = 64;
    const auto g = random_grid(np, nt, 7);
    const auto f = BoundaryField::from_grid(np, nt, g);
    const auto back = f.grid();
    double sup = 0.0, l2grid = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
        sup = std::max(sup, std::abs(back[i] - g[i]));
        l2grid += g[i] * g[i];
    }
    l2grid = std::sqrt(l2grid / static_cast<double>(g.size()));
    CHECK(sup < 1e-12);
    CHECK(f.l2_norm() == doctest::Approx(l2grid).epsilon(1e-12));
}

TEST_CASE("hilbert transform multipliers") {
    const std::size_t np = 8, nt = 32;
    // mode one: H maps cos(theta) -> -sin(theta) and sin -> cos, i.e. the
    // multiplier i sign(j) on e^{i j theta}
    {
        std::vector<double> g1(np * nt);
        for (std::size_t i = 0; i < np; ++i)
            for (std::size_t m = 0; m < nt; ++m)
                g1[i * nt + m] = std::cos(2.0 * M_PI * m / nt);
        const auto h1 = BoundaryField::from_grid(np, nt, g1).hilbert_theta().grid();
        for (std::size_t m = 0; m < nt; ++m)
            CHECK(std::abs(h1[m] + std::sin(2.0 * M_PI * m / nt)) < 1e-13);
    }
    std::vector<double> g(np * nt);
    for (std::size_t i = 0; i < np; ++i)
        for (std::size_t m = 0; m < nt; ++m)
            g[i * nt + m] = std::cos(2.0 * (2.0 * M_PI * m / nt));
    const auto f = BoundaryField::from_grid(np, nt, g);
    const auto hf = f.hilbert_theta().grid();
    double err = 0.0;
    for (std::size_t i = 0; i < np; ++i)
        for (std::size_t m = 0; m < nt; ++m)
            err = std::max(err, std::abs(hf[i * nt + m] +
                                         std::sin(2.0 * (2.0 * M_PI * m / nt))));
    CHECK(err < 1e-13);

    // H^2 = -(Id - theta mean) on arbitrary data
    auto r = BoundaryField::from_grid(np, nt, random_grid(np, nt, 11));
    auto r0 = r;
    r0.project_zero_theta_mean();
    auto hh = r.hilbert_theta().hilbert_theta();
    hh += r0;
    CHECK(hh.sup_norm() < 1e-12);
}

TEST_CASE("spectral derivatives") {
    const std::size_t np = 16, nt = 32;
    std::vector<double> g(np * nt);
    for (std::size_t i = 0; i < np; ++i)
        for (std::size_t m = 0; m < nt; ++m)
            g[i * nt + m] = std::cos(3.0 * (2.0 * M_PI * m / nt));
    const auto f = BoundaryField::from_grid(np, nt, g);
    const auto d = f.derivative(Axis::Theta).grid();
    double err = 0.0;
    for (std::size_t i = 0; i < np; ++i)
        for (std::size_t m = 0; m < nt; ++m)
            err = std::max(err, std::abs(d[i * nt + m] +
                                         3.0 * std::sin(3.0 * (2.0 * M_PI * m / nt))));
    CHECK(err < 1e-12);
    CHECK(f.derivative(Axis::Phi).sup_norm() < 1e-12); // phi-independent field

    auto r = BoundaryField::from_grid(np, nt, random_grid(np, nt, 3));
    auto ab = r.derivative(Axis::Phi).derivative(Axis::Theta);
    ab -= r.derivative(Axis::Theta).derivative(Axis::Phi);
    CHECK(ab.sup_norm() < 1e-11);
}

TEST_CASE("theta-elliptic inverse") {
    const std::size_t np = 8, nt = 32;
    std::vector<double> g(np * nt);
    for (std::size_t i = 0; i < np; ++i)
        for (std::size_t m = 0; m < nt; ++m)
            g[i * nt + m] = std::sin(2.0 * (2.0 * M_PI * m / nt));
    const auto f = BoundaryField::from_grid(np, nt, g);
    const auto u = f.invert_theta_elliptic().grid();
    double err = 0.0;
    for (std::size_t i = 0; i < np; ++i)
        for (std::size_t m = 0; m < nt; ++m)
            err = std::max(err,
                           std::abs(u[i * nt + m] + std::cos(2.0 * (2.0 * M_PI * m / nt))));
    CHECK(err < 1e-13);

    CHECK(BoundaryField(np, nt).invert_theta_elliptic().sup_norm() == 0.0);

    std::vector<double> bad(np * nt);
    for (std::size_t i = 0; i < np; ++i)
        for (std::size_t m = 0; m < nt; ++m) bad[i * nt + m] = std::cos(2.0 * M_PI * m / nt);
    CHECK_THROWS_AS(BoundaryField::from_grid(np, nt, bad).invert_theta_elliptic(),
                    DegenerateModeError);

    // (d_theta - H) applied back is the identity away from the kernel; the
    // unpaired Nyquist column is outside the representable band
    auto r = BoundaryField::from_grid(np, nt, random_grid(np, nt, 5));
    for (int l = -int(np) / 2; l < int(np) / 2; ++l) {
        for (int j : {-1, 0, 1}) r.set_coef(l, j, 0.0);
        r.set_coef(l, -int(nt) / 2, 0.0);
    }
    auto inv = r.invert_theta_elliptic();
    auto lhs = inv.derivative(Axis::Theta);
    lhs -= inv.hilbert_theta();
    lhs -= r;
    CHECK(lhs.sup_norm() < 1e-12);
}

TEST_CASE("two-thirds dealiasing and products") {
    const std::size_t np = 32, nt = 32;
    auto a = BoundaryField::from_grid(np, nt, random_grid(np, nt, 1));
    auto b = BoundaryField::from_grid(np, nt, random_grid(np, nt, 2));
    const auto p = multiply_dealiased(a, b);
    // the product of dealiased fields carries no energy created from nothing
    CHECK(p.sup_norm() <= a.sup_norm() * b.sup_norm() * 1.0001 + 1e-12);
}

TEST_CASE("ode: exponential growth to e") {
    auto rhs = [](double, const std::vector<double>& y, std::vector<double>& dy) {
        dy[0] = y[0];
    };
    const auto y = ode_integrate(rhs, {1.0}, 0.0, 1.0, {1e-13, 1e-13});
    CHECK(std::abs(y[0] - std::exp(1.0)) < 1e-12);
}

TEST_CASE("ode: time-reversal round trip") {
    auto rhs = [](double t, const std::vector<double>& y, std::vector<double>& dy) {
        dy[0] = -y[1] + 0.1 * std::sin(t);
        dy[1] = y[0];
    };
    OdeOptions opt{1e-12, 1e-12};
    auto y = ode_integrate(rhs, {1.0, 0.25}, 0.0, 5.0, opt);
    y = ode_integrate(rhs, y, 5.0, 0.0, opt);
    CHECK(std::abs(y[0] - 1.0) < 1e-10);
    CHECK(std::abs(y[1] - 0.25) < 1e-10);
}

TEST_CASE("ode: dense output and event location") {
    auto rhs = [](double t, const std::vector<double>&, std::vector<double>& dy) {
        dy[0] = std::cos(t);
    };
    DenseSolution dense;
    ode_integrate(rhs, {0.0}, 0.0, 4.0, {1e-12, 1e-12}, &dense);
    for (double t : {0.3, 1.1, 2.7, 3.9})
        CHECK(std::abs(dense.eval(t)[0] - std::sin(t)) < 1e-11);
    // first root of y - 1/2 = 0 is at pi/6... sin t = 1/2
    const double t_hit = locate_event(
        dense, [](double, const std::vector<double>& y) { return y[0] - 0.5; });
    CHECK(std::abs(t_hit - M_PI / 6.0) < 1e-10);
}

TEST_CASE("real grids produce conjugate-symmetric coefficients") {
    const std::size_t np = 16, nt = 16;
    const auto f = BoundaryField::from_grid(np, nt, random_grid(np, nt, 21));
    CHECK(f.is_real());
    for (int l = -7; l <= 7; ++l)
        for (int j = -7; j <= 7; ++j)
            CHECK(std::abs(f.coef(-l, -j) - std::conj(f.coef(l, j))) < 1e-14);
}

TEST_CASE("field json round trip") {
    const std::size_t np = 8, nt = 16;
    const auto f = BoundaryField::from_grid(np, nt, random_grid(np, nt, 9));
    const auto g = BoundaryField::from_json(f.to_json());
    auto diff = f;
    diff -= g;
    CHECK(diff.sup_norm() < 1e-15);
    CHECK(g.is_real() == f.is_real());
}
