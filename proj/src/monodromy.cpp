#include "leapfrog/monodromy.hpp"

#include <algorithm>
#include <cmath>

#include "leapfrog/fft.hpp"
#include "leapfrog/ode.hpp"

namespace lf::monodromy {

using lf::numerics::DenseSolution;
using lf::numerics::OdeOptions;
using lf::pointvortex::PolarOrbit;
using lf::pointvortex::VortexParams;

Mat4 mat_identity() {
    Mat4 m{};
    for (int i = 0; i < 4; ++i) m[i * 4 + i] = 1.0;
    return m;
}

Mat4 mat_mul(const Mat4& a, const Mat4& b) {
    Mat4 c{};
    for (int i = 0; i < 4; ++i)
        for (int k = 0; k < 4; ++k) {
            const cplx aik = a[i * 4 + k];
            for (int j = 0; j < 4; ++j) c[i * 4 + j] += aik * b[k * 4 + j];
        }
    return c;
}

cplx mat_det(Mat4 a) {
    // LU with partial pivoting
    cplx det = 1.0;
    for (int col = 0; col < 4; ++col) {
        int piv = col;
        for (int r = col + 1; r < 4; ++r)
            if (std::abs(a[r * 4 + col]) > std::abs(a[piv * 4 + col])) piv = r;
        if (piv != col) {
            for (int j = 0; j < 4; ++j) std::swap(a[col * 4 + j], a[piv * 4 + j]);
            det = -det;
        }
        const cplx p = a[col * 4 + col];
        if (p == cplx(0.0, 0.0)) return 0.0;
        det *= p;
        for (int r = col + 1; r < 4; ++r) {
            const cplx f = a[r * 4 + col] / p;
            for (int j = col; j < 4; ++j) a[r * 4 + j] -= f * a[col * 4 + j];
        }
    }
    return det;
}

Mat4 mat_inverse(Mat4 a) {
    Mat4 inv = mat_identity();
    for (int col = 0; col < 4; ++col) {
        int piv = col;
        for (int r = col + 1; r < 4; ++r)
            if (std::abs(a[r * 4 + col]) > std::abs(a[piv * 4 + col])) piv = r;
        if (std::abs(a[piv * 4 + col]) == 0.0)
            throw NearSingularMonodromy("mat_inverse: singular matrix");
        if (piv != col)
            for (int j = 0; j < 4; ++j) {
                std::swap(a[col * 4 + j], a[piv * 4 + j]);
                std::swap(inv[col * 4 + j], inv[piv * 4 + j]);
            }
        const cplx p = a[col * 4 + col];
        for (int j = 0; j < 4; ++j) {
            a[col * 4 + j] /= p;
            inv[col * 4 + j] /= p;
        }
        for (int r = 0; r < 4; ++r) {
            if (r == col) continue;
            const cplx f = a[r * 4 + col];
            for (int j = 0; j < 4; ++j) {
                a[r * 4 + j] -= f * a[col * 4 + j];
                inv[r * 4 + j] -= f * inv[col * 4 + j];
            }
        }
    }
    return inv;
}

double mat_frobenius(const Mat4& a) {
    double s = 0.0;
    for (const auto& v : a) s += std::norm(v);
    return std::sqrt(s);
}

std::array<cplx, 4> mat_apply(const Mat4& a, const std::array<cplx, 4>& v) {
    std::array<cplx, 4> out{};
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) out[i] += a[i * 4 + j] * v[j];
    return out;
}

std::array<cplx, 4> rho_at(double q, double theta, double phi, double y0, double omega0,
                           double eps, double c2) {
    const cplx I(0.0, 1.0);
    const double sq = std::sqrt(q);
    const cplx w3 = I * (sq * std::sin(theta) + y0);
    const cplx w4 = cplx(sq * std::cos(theta), y0);
    const cplx w3s = w3 * w3, w4s = w4 * w4;
    const double th_hat = theta - phi; // Theta - phi
    const cplx e2h = std::polar(1.0, 2.0 * th_hat);
    const cplx e2p = std::polar(1.0, 2.0 * phi);
    const cplx rho1 = (I / omega0) * (omega0 + 0.5 / w3s - eps * c2);
    // overall sign of rho2, rho4 fixed by the xi0 -> 0 limit (i,-i/4,0,i/2)
    const cplx rho2 = (I / (4.0 * omega0)) * (std::conj(e2h) / q - e2p / w3s - e2p / w4s);
    const cplx rho3 = -I / (2.0 * omega0 * w4s);
    const cplx rho4 = -I * e2h / (2.0 * omega0 * q);
    return {rho1, rho2, rho3, rho4};
}

Mat4 mode_one_matrix(double q, double theta, double phi, double y0, double omega0,
                     double eps, double c2) {
    const auto r = rho_at(q, theta, phi, y0, omega0, eps, c2);
    const auto rp = rho_at(q, theta + M_PI, phi + M_PI, y0, omega0, eps, c2);
    Mat4 A;
    A[0] = r[0];
    A[1] = r[1];
    A[2] = r[2];
    A[3] = r[3];
    A[4] = std::conj(r[1]);
    A[5] = std::conj(r[0]);
    A[6] = std::conj(r[3]);
    A[7] = std::conj(r[2]);
    A[8] = rp[2];
    A[9] = rp[3];
    A[10] = rp[0];
    A[11] = rp[1];
    A[12] = std::conj(rp[3]);
    A[13] = std::conj(rp[2]);
    A[14] = std::conj(rp[1]);
    A[15] = std::conj(rp[0]);
    return A;
}

ModeOneSystem build_system(double eps, const VortexParams& p, const PolarOrbit& orbit,
                           double c2) {
    ModeOneSystem sys;
    sys.eps = eps;
    sys.c2 = c2;
    sys.params = p;
    sys.orbit = orbit;
    const std::size_t n = orbit.n_phi;
    sys.rho1.resize(n);
    sys.rho2.resize(n);
    sys.rho3.resize(n);
    sys.rho4.resize(n);
    for (std::size_t k = 0; k < n; ++k) {
        const double phi = 2.0 * M_PI * static_cast<double>(k) / static_cast<double>(n);
        const auto r =
            rho_at(orbit.q[k], orbit.theta_big[k], phi, p.y0, orbit.omega0, eps, c2);
        sys.rho1[k] = r[0];
        sys.rho2[k] = r[1];
        sys.rho3[k] = r[2];
        sys.rho4[k] = r[3];
    }
    return sys;
}

Mat4 a0_matrix() {
    const cplx I(0.0, 1.0);
    Mat4 A{};
    A[0] = I;
    A[1] = -I / 4.0;
    A[2] = 0.0;
    A[3] = I / 2.0;
    A[4] = I / 4.0;
    A[5] = -I;
    A[6] = -I / 2.0;
    A[7] = 0.0;
    A[8] = 0.0;
    A[9] = I / 2.0;
    A[10] = I;
    A[11] = -I / 4.0;
    A[12] = -I / 2.0;
    A[13] = 0.0;
    A[14] = I / 4.0;
    A[15] = -I;
    return A;
}

Mat4 a0_exponential(double phi) {
    const cplx I(0.0, 1.0);
    const double s15 = std::sqrt(15.0), s7 = std::sqrt(7.0);
    const double c15 = std::cos(s15 / 4.0 * phi), c7 = std::cos(s7 / 4.0 * phi);
    const double n15 = std::sin(s15 / 4.0 * phi), n7 = std::sin(s7 / 4.0 * phi);
    const cplx a1 = 0.5 * c15 + 0.5 * c7 + I * (2.0 / s15 * n15 + 2.0 / s7 * n7);
    const cplx a2 = 0.5 * I * (n15 / s15 - 3.0 / s7 * n7);
    const cplx a3 = 0.5 * c15 - 0.5 * c7 + I * (2.0 / s15 * n15 - 2.0 / s7 * n7);
    const cplx a4 = 0.5 * I * (n15 / s15 + 3.0 / s7 * n7);
    Mat4 E;
    E[0] = a1;
    E[1] = a2;
    E[2] = a3;
    E[3] = a4;
    E[4] = std::conj(a2);
    E[5] = std::conj(a1);
    E[6] = std::conj(a4);
    E[7] = std::conj(a3);
    E[8] = a3;
    E[9] = a4;
    E[10] = a1;
    E[11] = a2;
    E[12] = std::conj(a4);
    E[13] = std::conj(a3);
    E[14] = std::conj(a2);
    E[15] = std::conj(a1);
    return E;
}

double a0_det_gap_identity(double phi) {
    const double s15 = std::sin(std::sqrt(15.0) / 8.0 * phi);
    const double s7 = std::sin(std::sqrt(7.0) / 8.0 * phi);
    return 16.0 * s15 * s15 * s7 * s7;
}

namespace {

void pack_matrix(const Mat4& m, std::vector<double>& y, std::size_t off) {
    for (int i = 0; i < 16; ++i) {
        y[off + 2 * i] = m[i].real();
        y[off + 2 * i + 1] = m[i].imag();
    }
}

Mat4 unpack_matrix(const std::vector<double>& y, std::size_t off) {
    Mat4 m;
    for (int i = 0; i < 16; ++i) m[i] = cplx(y[off + 2 * i], y[off + 2 * i + 1]);
    return m;
}

void accumulate_product(const Mat4& A, const std::vector<double>& y, std::size_t off,
                        std::vector<double>& dy) {
    // dY = A * Y for the packed 4x4 block at offset off
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
            cplx s(0.0, 0.0);
            for (int k = 0; k < 4; ++k) {
                const cplx yk(y[off + 2 * (k * 4 + j)], y[off + 2 * (k * 4 + j) + 1]);
                s += A[i * 4 + k] * yk;
            }
            dy[off + 2 * (i * 4 + j)] = s.real();
            dy[off + 2 * (i * 4 + j) + 1] = s.imag();
        }
}

} // namespace

Mat4 a0_exponential_ode(double phi, double tol) {
    const Mat4 A = a0_matrix();
    std::vector<double> y(32);
    pack_matrix(mat_identity(), y, 0);
    auto rhs = [&A](double, const std::vector<double>& yy, std::vector<double>& dy) {
        accumulate_product(A, yy, 0, dy);
    };
    OdeOptions opt;
    opt.rtol = tol;
    opt.atol = tol;
    y = numerics::ode_integrate(rhs, std::move(y), 0.0, phi, opt);
    return unpack_matrix(y, 0);
}

namespace {

// state layout: y[0] = q, y[1] = Theta, y[2..33] = packed M
struct CoupledRhs {
    double y0, omega0, eps, c2;
    void operator()(double phi, const std::vector<double>& y,
                    std::vector<double>& dy) const {
        const auto d = lf::pointvortex::q_theta_rhs(y[0], y[1], y0, omega0);
        dy[0] = d[0];
        dy[1] = d[1];
        const Mat4 A = mode_one_matrix(y[0], y[1], phi, y0, omega0, eps, c2);
        accumulate_product(A, y, 2, dy);
    }
};

double structure_defect(const Mat4& m) {
    // rows 2,4 are the conjugates of rows 1,3 with columns swapped pairwise
    const auto sw = [](int j) { return (j % 2 == 0) ? j + 1 : j - 1; };
    double d = 0.0;
    for (int j = 0; j < 4; ++j) {
        d = std::max(d, std::abs(m[1 * 4 + j] - std::conj(m[0 * 4 + sw(j)])));
        d = std::max(d, std::abs(m[3 * 4 + j] - std::conj(m[2 * 4 + sw(j)])));
    }
    return d;
}

} // namespace

MonodromyReport fundamental_matrix(const ModeOneSystem& sys, double tol) {
    const CoupledRhs rhs{sys.params.y0, sys.orbit.omega0, sys.eps, sys.c2};
    std::vector<double> y(34);
    y[0] = sys.params.xi0 * sys.params.xi0;
    y[1] = M_PI / 2.0;
    pack_matrix(mat_identity(), y, 2);
    OdeOptions opt;
    opt.rtol = tol;
    opt.atol = tol;
    y = numerics::ode_integrate(rhs, std::move(y), 0.0, 2.0 * M_PI, opt);
    MonodromyReport rep;
    rep.M = unpack_matrix(y, 2);
    Mat4 gap = rep.M;
    for (int i = 0; i < 4; ++i) gap[i * 4 + i] -= 1.0;
    rep.det_gap = mat_det(gap);
    rep.structure_defect = structure_defect(rep.M);
    rep.structure_ok = rep.structure_defect < 1e-8;
    return rep;
}

double det_gap_at(double y0, double xi0, double eps, double c2, double tol) {
    const VortexParams p{y0, xi0, eps};
    p.validate();
    const double T = lf::pointvortex::period_quadrature(p);
    const CoupledRhs rhs{y0, 2.0 * M_PI / T, eps, c2};
    std::vector<double> y(34);
    y[0] = xi0 * xi0;
    y[1] = M_PI / 2.0;
    pack_matrix(mat_identity(), y, 2);
    OdeOptions opt;
    opt.rtol = tol;
    opt.atol = tol;
    y = numerics::ode_integrate(rhs, std::move(y), 0.0, 2.0 * M_PI, opt);
    Mat4 gap = unpack_matrix(y, 2);
    for (int i = 0; i < 4; ++i) gap[i * 4 + i] -= 1.0;
    return mat_det(gap).real();
}

std::vector<SingularRoot> singular_scan(double y0, double lo, double hi, double grid_step) {
    std::vector<SingularRoot> roots;
    const std::size_t n = static_cast<std::size_t>(std::ceil((hi - lo) / grid_step)) + 1;
    auto slope_at = [&](double r, double h) {
        return (det_gap_at(y0, r + h) - det_gap_at(y0, r - h)) / (2.0 * h);
    };
    double x_prev = lo, g_prev = det_gap_at(y0, lo);
    if (g_prev == 0.0) roots.push_back({lo, slope_at(lo, grid_step / 10.0)});
    for (std::size_t k = 1; k < n; ++k) {
        const double x = std::min(lo + grid_step * static_cast<double>(k), hi);
        const double g = det_gap_at(y0, x);
        if (g == 0.0) {
            roots.push_back({x, slope_at(x, grid_step / 10.0)});
        } else if (g_prev != 0.0 && g_prev * g < 0.0) {
            double a = x_prev, b = x, ga = g_prev;
            for (int it = 0; it < 60 && (b - a) > 1e-11; ++it) {
                const double m = 0.5 * (a + b);
                const double gm = det_gap_at(y0, m);
                if (ga * gm <= 0.0)
                    b = m;
                else {
                    a = m;
                    ga = gm;
                }
            }
            const double r = 0.5 * (a + b);
            const double h = 10.0 * std::max(1e-11, b - a);
            const double slope = (det_gap_at(y0, r + h) - det_gap_at(y0, r - h)) / (2.0 * h);
            roots.push_back({r, slope});
        }
        x_prev = x;
        g_prev = g;
        if (x >= hi) break;
    }
    return roots;
}

ModeOneSolution solve_mode_one(const ModeOneSystem& sys, const std::vector<cplx>& g1,
                               double sigma, const std::vector<double>& singular_roots,
                               double tol) {
    const std::size_t n = sys.orbit.n_phi;
    if (g1.size() != n)
        throw std::invalid_argument("solve_mode_one: forcing size must match orbit grid");
    for (double r : singular_roots)
        if (std::abs(sys.params.xi0 - r) < sigma)
            throw NearSingularMonodromy(
                "solve_mode_one: xi0 within sigma of the singular set");
    const double eps = sys.eps;
    if (!(eps > 0.0))
        throw std::invalid_argument("solve_mode_one: eps must be positive");

    // spectral coefficients of the forcing for off-grid evaluation
    std::vector<cplx> ghat(g1);
    numerics::fft_forward(ghat);
    auto g_eval = [&](double phi) {
        cplx s(0.0, 0.0);
        for (std::size_t k = 0; k < n; ++k) {
            const int m = numerics::fft_freq(k, n);
            s += ghat[k] * std::polar(1.0, m * phi);
        }
        return s;
    };

    const double om = sys.orbit.omega0;
    const double is2 = 1.0 / (eps * eps);
    // state: q, Theta, M (32), P (8)
    auto rhs = [&](double phi, const std::vector<double>& y, std::vector<double>& dy) {
        const auto d = lf::pointvortex::q_theta_rhs(y[0], y[1], sys.params.y0, om);
        dy[0] = d[0];
        dy[1] = d[1];
        const Mat4 A =
            mode_one_matrix(y[0], y[1], phi, sys.params.y0, om, sys.eps, sys.c2);
        accumulate_product(A, y, 2, dy);
        const cplx ga = g_eval(phi) / om, gb = g_eval(phi + M_PI) / om;
        const std::array<cplx, 4> P{cplx(y[34], y[35]), cplx(y[36], y[37]),
                                    cplx(y[38], y[39]), cplx(y[40], y[41])};
        const auto AP = mat_apply(A, P);
        const std::array<cplx, 4> G{ga, std::conj(ga), gb, std::conj(gb)};
        for (int i = 0; i < 4; ++i) {
            dy[34 + 2 * i] = AP[i].real() + is2 * G[i].real();
            dy[34 + 2 * i + 1] = AP[i].imag() + is2 * G[i].imag();
        }
    };

    std::vector<double> y(42, 0.0);
    y[0] = sys.params.xi0 * sys.params.xi0;
    y[1] = M_PI / 2.0;
    pack_matrix(mat_identity(), y, 2);
    OdeOptions opt;
    opt.rtol = tol;
    opt.atol = tol;
    DenseSolution dense;
    y = numerics::ode_integrate(rhs, std::move(y), 0.0, 2.0 * M_PI, opt, &dense);

    const Mat4 M2pi = unpack_matrix(y, 2);
    Mat4 gap = M2pi;
    for (int i = 0; i < 4; ++i) gap[i * 4 + i] -= 1.0;
    if (std::abs(mat_det(gap)) < 1e-10)
        throw NearSingularMonodromy("solve_mode_one: Id - M(2pi) numerically singular");
    const std::array<cplx, 4> P2pi{cplx(y[34], y[35]), cplx(y[36], y[37]),
                                   cplx(y[38], y[39]), cplx(y[40], y[41])};
    Mat4 id_minus_M = mat_identity();
    for (int i = 0; i < 16; ++i) id_minus_M[i] -= M2pi[i];
    ModeOneSolution sol;
    sol.H0 = mat_apply(mat_inverse(id_minus_M), P2pi);

    sol.H.resize(n);
    for (std::size_t k = 0; k < n; ++k) {
        const double phi = 2.0 * M_PI * static_cast<double>(k) / static_cast<double>(n);
        const auto ys = dense.eval(phi);
        const Mat4 Mphi = unpack_matrix(ys, 2);
        const std::array<cplx, 4> Pphi{cplx(ys[34], ys[35]), cplx(ys[36], ys[37]),
                                       cplx(ys[38], ys[39]), cplx(ys[40], ys[41])};
        const auto MH = mat_apply(Mphi, sol.H0);
        for (int i = 0; i < 4; ++i) sol.H[k][i] = MH[i] + Pphi[i];
    }

    // periodicity gap from the end state
    const auto MH0 = mat_apply(M2pi, sol.H0);
    double gapn = 0.0, h0n = 0.0;
    for (int i = 0; i < 4; ++i) {
        gapn = std::max(gapn, std::abs(MH0[i] + P2pi[i] - sol.H0[i]));
        h0n = std::max(h0n, std::abs(sol.H0[i]));
    }
    sol.periodicity_gap = gapn / std::max(1.0, h0n);

    // back-substitution residual via spectral differentiation of H
    std::vector<std::vector<cplx>> comp(4, std::vector<cplx>(n));
    for (std::size_t k = 0; k < n; ++k)
        for (int i = 0; i < 4; ++i) comp[i][k] = sol.H[k][i];
    std::vector<std::vector<cplx>> dcomp(4, std::vector<cplx>(n));
    for (int i = 0; i < 4; ++i) {
        std::vector<cplx> c = comp[i];
        numerics::fft_forward(c);
        for (std::size_t k = 0; k < n; ++k) {
            int m = numerics::fft_freq(k, n);
            if (k == n / 2) m = 0;
            c[k] *= cplx(0.0, static_cast<double>(m));
        }
        numerics::fft_inverse(c);
        dcomp[i] = std::move(c);
    }
    double res = 0.0, hsup = 1.0;
    for (std::size_t k = 0; k < n; ++k) {
        const double phi = 2.0 * M_PI * static_cast<double>(k) / static_cast<double>(n);
        const auto qb = sys.orbit.q_theta_at(phi);
        const Mat4 A =
            mode_one_matrix(qb[0], qb[1], phi, sys.params.y0, om, sys.eps, sys.c2);
        const auto AH = mat_apply(A, sol.H[k]);
        const cplx ga = g_eval(phi) / om, gb = g_eval(phi + M_PI) / om;
        const std::array<cplx, 4> G{ga, std::conj(ga), gb, std::conj(gb)};
        for (int i = 0; i < 4; ++i) {
            res = std::max(res, std::abs(dcomp[i][k] - AH[i] - is2 * G[i]));
            hsup = std::max(hsup, std::abs(sol.H[k][i]));
        }
    }
    sol.residual = res / hsup;
    return sol;
}

double mu_jk(int j, int k, double eps, double omega0, double c2) {
    const double sgn = (j > 0) ? 1.0 : -1.0;
    return j * (0.5 - eps * eps * (omega0 - eps * c2)) -
           0.5 * (static_cast<double>(k) - 1.0) * sgn;
}

DivisorResult divisor(int j, int l, const VortexParams& p, double delta, double tau, int k,
                      double c2, double radius_factor) {
    if (std::abs(j) < k) throw std::invalid_argument("divisor: require |j| >= k");
    const double om = 2.0 * M_PI / lf::pointvortex::period_quadrature(p);
    const double lambda = std::pow(p.eps, 2.0 + delta);
    const double v = p.eps * p.eps * om * l + mu_jk(j, k, p.eps, om, c2);
    const double radius = radius_factor * lambda / std::pow(std::abs(j), tau);
    return {v, std::abs(v) < radius};
}

DivisorScan cantor_measure(double y0, double eps, double delta, double tau, double xi_lo,
                           double xi_hi, int j_max, int l_max, std::size_t omega_grid,
                           double radius_factor, double c2, double sigma,
                           const std::vector<double>& singular_roots) {
    if (!(tau > 1.0)) throw std::invalid_argument("cantor_measure: require tau > 1");
    DivisorScan scan;
    scan.eps = eps;
    scan.delta = delta;
    scan.tau = tau;
    scan.lambda = std::pow(eps, 2.0 + delta);
    scan.radius_factor = radius_factor;

    // monotone decreasing frequency table over [xi_lo, xi_hi]
    std::vector<double> xis(omega_grid + 1), oms(omega_grid + 1);
    for (std::size_t i = 0; i <= omega_grid; ++i) {
        xis[i] = xi_lo + (xi_hi - xi_lo) * static_cast<double>(i) /
                             static_cast<double>(omega_grid);
        oms[i] =
            2.0 * M_PI / lf::pointvortex::period_quadrature({y0, xis[i], eps});
    }
    const double om_min = oms.back(), om_max = oms.front();
    // xi at a given frequency, linear interpolation on the monotone table
    auto xi_of_omega = [&](double w) {
        if (w >= om_max) return xi_lo;
        if (w <= om_min) return xi_hi;
        std::size_t lo = 0, hi = omega_grid;
        while (hi - lo > 1) {
            const std::size_t mid = (lo + hi) / 2;
            if (oms[mid] >= w)
                lo = mid;
            else
                hi = mid;
        }
        const double t = (w - oms[lo]) / (oms[hi] - oms[lo]);
        return xis[lo] + t * (xis[hi] - xis[lo]);
    };

    const double e2 = eps * eps;
    if (l_max <= 0) {
        const double mu_span = 0.5 * j_max + 0.5;
        l_max = static_cast<int>(std::ceil(3.0 * mu_span / (e2 * om_min)));
    }

    // the resonant cell count scales like j_max^2/eps^2; fold chunks into a
    // running disjoint union so memory tracks the answer, not the raw count
    constexpr std::size_t chunk = 2'000'000;
    constexpr std::size_t record_cap = 1'000'000;
    std::vector<std::pair<double, double>> raw, merged;
    auto fold = [&]() {
        std::sort(raw.begin(), raw.end());
        std::vector<std::pair<double, double>> out;
        out.reserve(merged.size() + raw.size());
        auto push = [&out](std::pair<double, double> iv) {
            if (!out.empty() && iv.first <= out.back().second)
                out.back().second = std::max(out.back().second, iv.second);
            else
                out.push_back(iv);
        };
        std::size_t i = 0, j = 0;
        while (i < merged.size() || j < raw.size()) {
            if (j >= raw.size() || (i < merged.size() && merged[i] <= raw[j]))
                push(merged[i++]);
            else
                push(raw[j++]);
        }
        merged.swap(out);
        raw.clear();
    };
    auto record = [&](int l, int j, int k, double a, double b) {
        raw.emplace_back(a, b);
        ++scan.interval_count;
        if (scan.excluded.size() < record_cap) scan.excluded.push_back({l, j, k, a, b});
        if (raw.size() >= chunk) fold();
    };
    for (int k = 1; k <= 2; ++k) {
        for (int j = k; j <= j_max; ++j) {
            const double c = 0.5 * j + j * e2 * eps * c2 - 0.5 * (k - 1);
            const double radius = radius_factor * scan.lambda / std::pow(j, tau);
            // d = l - j; the zero of eps^2 om d + c needs om in range, so
            // d runs over a band of sign -sign(c)
            const int d_lo = static_cast<int>(std::floor((std::abs(c) - radius) /
                                                         (e2 * om_max)));
            const int d_hi = static_cast<int>(std::ceil((std::abs(c) + radius) /
                                                        (e2 * om_min)));
            for (int dd = std::max(d_lo, 1); dd <= d_hi; ++dd) {
                const int d = (c > 0.0) ? -dd : dd;
                const int l = j + d;
                if (std::abs(l) > l_max) continue;
                // |e2*om*d + c| < radius  =>  om in ((-c-radius)/(e2 d), (-c+radius)/(e2 d))
                double wa = (-c - radius) / (e2 * d);
                double wb = (-c + radius) / (e2 * d);
                if (wa > wb) std::swap(wa, wb);
                wa = std::max(wa, om_min);
                wb = std::min(wb, om_max);
                if (wa >= wb) continue;
                // omega decreasing in xi: interval flips
                const double a = xi_of_omega(wb);
                const double b = xi_of_omega(wa);
                if (b > a) record(l, j, k, a, b);
            }
            // d = 0: constant divisor, excluded only if |c| < radius
            if (std::abs(c) < radius) record(j, j, k, xi_lo, xi_hi);
        }
    }

    if (sigma > 0.0) {
        for (double r : singular_roots) {
            const double a = std::max(xi_lo, r - sigma);
            const double b = std::min(xi_hi, r + sigma);
            if (b > a) {
                raw.emplace_back(a, b);
                scan.sigma_measure += b - a;
            }
        }
    }
    fold();

    double measure = 0.0;
    for (const auto& iv : merged) measure += iv.second - iv.first;
    scan.measure = measure;

    // per-j contributions scale like j^{-tau}; the relative tail past j_max
    // is the corresponding ratio of the zeta partial sums
    const double tail_sum =
        std::pow(static_cast<double>(j_max), 1.0 - tau) / (tau - 1.0);
    double head_sum = 0.0;
    for (int j = 1; j <= j_max; ++j) head_sum += std::pow(j, -tau);
    scan.truncation_warning = tail_sum / (head_sum + tail_sum) > 0.10;
    return scan;
}

} // namespace lf::monodromy
