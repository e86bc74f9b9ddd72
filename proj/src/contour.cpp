#include "leapfrog/contour.hpp"

#include <algorithm>
#include <cmath>

#include "leapfrog/quadrature.hpp"

namespace lf::contour {

using lf::numerics::Axis;
using lf::numerics::BoundaryField;

double PatchGeometry::pole_margin() const {
    double m = std::numeric_limits<double>::max();
    for (std::size_t i = 0; i < n_phi(); ++i) {
        m = std::min(m, std::abs(w3[i]));
        m = std::min(m, std::abs(w4[i]));
        m = std::min(m, std::sqrt(orbit.q[i]));
    }
    return m;
}

PatchGeometry make_geometry(const lf::pointvortex::PolarOrbit& orbit, std::size_t k_max) {
    if (k_max < 2) throw std::invalid_argument("make_geometry: k_max must be >= 2");
    PatchGeometry g;
    g.orbit = orbit;
    g.k_max = k_max;
    const std::size_t n = orbit.n_phi;
    g.w3.resize(n);
    g.w4.resize(n);
    g.a_k.assign(k_max - 1, std::vector<cplx>(n));
    const cplx I(0.0, 1.0);
    for (std::size_t i = 0; i < n; ++i) {
        const double sq = std::sqrt(orbit.q[i]);
        const double th = orbit.theta_big[i];
        g.w3[i] = I * (sq * std::sin(th) + orbit.y0);
        g.w4[i] = cplx(sq * std::cos(th), orbit.y0);
        const cplx eI = std::polar(1.0, th);
        cplx ek(1.0, 0.0);           // e^{i k Theta}
        cplx w3k(1.0, 0.0), w4k(1.0, 0.0);
        double qk = 1.0;             // q^{k/2}
        for (std::size_t k = 1; k <= k_max; ++k) {
            ek *= eI;
            w3k *= g.w3[i];
            w4k *= g.w4[i];
            qk *= sq;
            if (k >= 2) g.a_k[k - 2][i] = 1.0 / qk - ek / w3k - ek / w4k;
        }
    }
    return g;
}

BoundaryField g_field(const PatchGeometry& geom, std::size_t n_theta) {
    const std::size_t np = geom.n_phi();
    std::vector<double> grid(np * n_theta);
    for (std::size_t i = 0; i < np; ++i) {
        const cplx a2 = geom.a_k[0][i];
        for (std::size_t m = 0; m < n_theta; ++m) {
            const double th = 2.0 * M_PI * static_cast<double>(m) / static_cast<double>(n_theta);
            grid[i * n_theta + m] = (a2 * std::polar(1.0, 2.0 * th)).real();
        }
    }
    return BoundaryField::from_grid(np, n_theta, grid);
}

SeriesField g0_series(double eps, const PatchGeometry& geom, std::size_t n_theta) {
    const double margin = geom.pole_margin();
    if (!(eps < margin / 3.0))
        throw ConvergenceMargin("g0_series: eps exceeds a third of the pole margin");
    const std::size_t np = geom.n_phi();
    std::vector<double> grid(np * n_theta, 0.0);
    for (std::size_t i = 0; i < np; ++i)
        for (std::size_t k = 2; k <= geom.k_max; ++k) {
            const double coef = ((k % 2 == 0) ? 1.0 : -1.0) * std::pow(eps, double(k)) / 2.0;
            const cplx ak = geom.a_k[k - 2][i];
            for (std::size_t m = 0; m < n_theta; ++m) {
                const double th =
                    2.0 * M_PI * static_cast<double>(m) / static_cast<double>(n_theta);
                grid[i * n_theta + m] +=
                    coef * (ak * std::polar(1.0, double(k) * th)).imag();
            }
        }
    SeriesField out{BoundaryField::from_grid(np, n_theta, grid), 0.0};
    const double rho = eps / margin;
    out.tail_bound =
        1.5 * std::pow(rho, double(geom.k_max + 1)) / (1.0 - rho);
    return out;
}

namespace {

// int_0^L l log|l - p| dl in closed form
double radial_log_integral(cplx p, double L) {
    if (L <= 0.0) return 0.0;
    if (std::abs(p.imag()) < 1e-12) {
        const double a = p.real();
        auto antider = [a](double l) {
            const double d = l - a;
            const double lg = (d == 0.0) ? 0.0 : std::log(std::abs(d));
            return 0.5 * (l * l - a * a) * lg - 0.25 * d * d - a * d;
        };
        return antider(L) - antider(0.0);
    }
    auto G = [p](cplx t) { return (0.5 * t * t + p * t) * std::log(t) - 0.25 * t * t - p * t; };
    return (G(cplx(L, 0.0) - p) - G(-p)).real();
}

struct GridView {
    const std::vector<double>* data;
    std::size_t np, nt;
    double operator()(std::size_t i, std::size_t m) const { return (*data)[i * nt + m]; }
};

std::vector<double> radius_grid(double eps, const BoundaryField& r) {
    const auto rg = r.grid();
    std::vector<double> R(rg.size());
    for (std::size_t i = 0; i < rg.size(); ++i) {
        const double v = 1.0 + 2.0 * eps * rg[i];
        if (!(v > 0.0))
            throw RadiusPositivity("psi_eval: 1 + 2 eps r lost positivity");
        R[i] = std::sqrt(v);
    }
    return R;
}

void check_grids(const BoundaryField& r, const PatchGeometry& geom) {
    if (r.n_phi() != geom.n_phi())
        throw std::invalid_argument("contour: field phi grid must match the orbit grid");
}

} // namespace

std::vector<double> psi_eval(int n, double eps, const BoundaryField& r,
                             const PatchGeometry& geom, const PsiOptions& opt) {
    check_grids(r, geom);
    const std::size_t np = r.n_phi(), nt = r.n_theta();
    const auto Rg = radius_grid(eps, r);
    const GridView R{&Rg, np, nt};
    std::vector<double> out(np * nt, 0.0);

    std::vector<double> theta(nt);
    std::vector<cplx> eitheta(nt);
    for (std::size_t m = 0; m < nt; ++m) {
        theta[m] = 2.0 * M_PI * static_cast<double>(m) / static_cast<double>(nt);
        eitheta[m] = std::polar(1.0, theta[m]);
    }

    if (n == 1) {
        for (std::size_t i = 0; i < np; ++i) {
            for (std::size_t m = 0; m < nt; ++m) {
                const double R0 = R(i, m);
                const cplx z = R0 * eitheta[m];
                double acc = 0.0;
                for (std::size_t j = 0; j < nt; ++j) {
                    if (j == m) continue; // vanishing integrand at the diagonal
                    const cplx p = z * std::conj(eitheta[j]);
                    acc += radial_log_integral(p, R(i, j)) - radial_log_integral(p, R0);
                }
                out[i * nt + m] = 0.5 * R0 * R0 * std::log(R0) +
                                  acc / static_cast<double>(nt);
            }
        }
        return out;
    }
    if (n < 2 || n > 4) throw std::invalid_argument("psi_eval: n must be 1..4");

    const numerics::GaussLegendre gl(opt.n_l, 0.0, 1.0);
    const int sign_l = (n == 4) ? -1 : +1; // (-1)^{k+1} with k = n-3
    for (std::size_t i = 0; i < np; ++i) {
        const std::size_t is = (n == 3) ? i : (i + np / 2) % np; // delayed slice for Psi_2, Psi_4
        const double sq = std::sqrt(geom.orbit.q[i]);
        const double Th = geom.orbit.theta_big[i];
        const cplx eiTh = std::polar(1.0, Th);
        const cplx pole = (n == 2) ? cplx(sq, 0.0) : (n == 3 ? geom.w3[i] : geom.w4[i]);
        const double outer_sign = (n == 2) ? 1.0 : -1.0;
        // direction of the l e^{i ...} term and the fixed part of f
        std::vector<cplx> c1(nt);
        for (std::size_t j = 0; j < nt; ++j) {
            const cplx dir = (n == 2) ? eitheta[j]
                                      : double(sign_l) * std::conj(eitheta[j] * eiTh);
            c1[j] = eps * dir / pole;
        }
        for (std::size_t m = 0; m < nt; ++m) {
            const cplx z = R(i, m) * eitheta[m];
            const cplx zf = (n == 2) ? z : z * eiTh;
            const cplx c0 = eps * zf / pole;
            double acc = 0.0;
            for (std::size_t j = 0; j < nt; ++j) {
                const double Rup = R(is, j);
                const cplx cj = c1[j];
                double inner = 0.0;
                for (std::size_t u = 0; u < opt.n_l; ++u) {
                    const double l = Rup * gl.x[u];
                    const cplx w = c0 + l * cj;
                    const double val =
                        0.5 * std::log1p(2.0 * w.real() + std::norm(w)) - w.real();
                    inner += gl.w[u] * gl.x[u] * val;
                }
                acc += Rup * Rup * inner;
            }
            out[i * nt + m] = outer_sign * acc / static_cast<double>(nt);
        }
    }
    return out;
}

std::vector<double> dtheta_psi1(double eps, const BoundaryField& r,
                                const PatchGeometry& geom) {
    check_grids(r, geom);
    const std::size_t np = r.n_phi(), nt = r.n_theta();
    const auto Rg = radius_grid(eps, r);
    const GridView R{&Rg, np, nt};
    std::vector<double> out(np * nt);

    std::vector<cplx> eitheta(nt);
    for (std::size_t m = 0; m < nt; ++m)
        eitheta[m] = std::polar(1.0, 2.0 * M_PI * static_cast<double>(m) /
                                         static_cast<double>(nt));

    std::vector<cplx> w(nt), wp(nt), what(nt), logconv(nt);
    for (std::size_t i = 0; i < np; ++i) {
        for (std::size_t m = 0; m < nt; ++m) w[m] = R(i, m) * eitheta[m];
        // spectral derivative of the boundary samples
        what = w;
        numerics::fft_forward(what);
        std::vector<cplx> dhat(nt);
        for (std::size_t k = 0; k < nt; ++k) {
            int fk = numerics::fft_freq(k, nt);
            if (k == nt / 2) fk = 0;
            dhat[k] = what[k] * cplx(0.0, double(fk));
        }
        wp = dhat;
        numerics::fft_inverse(wp);
        // exact convolution against log|2 sin((eta-theta)/2)|:
        // each mode k != 0 picks up the factor -pi/|k|
        for (std::size_t k = 0; k < nt; ++k) {
            const int fk = numerics::fft_freq(k, nt);
            logconv[k] = (fk == 0) ? cplx(0.0, 0.0)
                                   : dhat[k] * (-M_PI / std::abs(double(fk)));
        }
        numerics::fft_inverse(logconv);

        const double dEta = 2.0 * M_PI / static_cast<double>(nt);
        for (std::size_t m = 0; m < nt; ++m) {
            cplx Q(0.0, 0.0);
            for (std::size_t j = 0; j < nt; ++j) {
                double smooth;
                if (j == m) {
                    smooth = std::log(std::abs(wp[m]));
                } else {
                    const double dst = std::abs(w[m] - w[j]);
                    const double ref =
                        std::abs(2.0 * std::sin(M_PI * (double(j) - double(m)) /
                                                static_cast<double>(nt)));
                    smooth = std::log(dst / ref);
                }
                Q += smooth * wp[j];
            }
            Q = Q * dEta + logconv[m];
            // dPsi1/dtheta = Re{ (i / 2pi) Q conj(w'(theta)) }
            out[i * nt + m] = (cplx(0.0, 1.0) / (2.0 * M_PI) * Q * std::conj(wp[m])).real();
        }
    }
    return out;
}

BoundaryField sum_dtheta_psi(double eps, const BoundaryField& r, const PatchGeometry& geom,
                             const PsiOptions& opt) {
    const std::size_t np = r.n_phi(), nt = r.n_theta();
    std::vector<double> smooth_sum(np * nt, 0.0);
    for (int n = 2; n <= 4; ++n) {
        const auto psi = psi_eval(n, eps, r, geom, opt);
        for (std::size_t q = 0; q < psi.size(); ++q) smooth_sum[q] += psi[q];
    }
    BoundaryField total =
        BoundaryField::from_grid(np, nt, smooth_sum).derivative(Axis::Theta);
    total += BoundaryField::from_grid(np, nt, dtheta_psi1(eps, r, geom));
    return total;
}

namespace {

BoundaryField phi_profile_field(const std::vector<double>& prof, std::size_t np,
                                std::size_t nt) {
    std::vector<double> grid(np * nt);
    for (std::size_t i = 0; i < np; ++i)
        for (std::size_t m = 0; m < nt; ++m) grid[i * nt + m] = prof[i];
    return BoundaryField::from_grid(np, nt, grid);
}

} // namespace

BoundaryField G_residual(double eps, const BoundaryField& r, const PatchGeometry& geom,
                         const PsiOptions& opt) {
    check_grids(r, geom);
    const double om = geom.omega0();
    const double e3 = eps * eps * eps;
    BoundaryField tdot =
        phi_profile_field(geom.orbit.theta_dot, r.n_phi(), r.n_theta());
    BoundaryField transport = r.derivative(Axis::Phi);
    transport -= multiply_dealiased(tdot, r.derivative(Axis::Theta));
    BoundaryField G = sum_dtheta_psi(eps, r, geom, opt);
    transport *= e3 * om;
    G += transport;
    return G;
}

BoundaryField linearized_leading(double eps, const BoundaryField& r,
                                 const BoundaryField& h, const PatchGeometry& geom) {
    check_grids(r, geom);
    const double om = geom.omega0();
    BoundaryField g = g_field(geom, r.n_theta());
    BoundaryField tdot = phi_profile_field(geom.orbit.theta_dot, r.n_phi(), r.n_theta());

    BoundaryField V = r;
    V *= -0.5 * eps;
    tdot *= eps * eps * om;
    V -= tdot;
    g *= 0.5 * eps * eps;
    V -= g;
    // the leading constant 1/2 of the multiplier
    {
        std::vector<double> half(r.n_phi() * r.n_theta(), 0.5);
        V += BoundaryField::from_grid(r.n_phi(), r.n_theta(), half);
    }
    BoundaryField out = multiply_dealiased(V, h).derivative(Axis::Theta);
    out *= eps;
    BoundaryField adv = h.derivative(Axis::Phi);
    adv *= eps * eps * eps * om;
    out += adv;
    BoundaryField hil = h.hilbert_theta();
    hil *= -0.5 * eps;
    out += hil;
    return out;
}

BoundaryField approx_solution(double eps, const PatchGeometry& geom) {
    const double margin = geom.pole_margin();
    if (!(eps < margin / 3.0))
        throw ConvergenceMargin("approx_solution: eps exceeds a third of the pole margin");
    const std::size_t np = geom.n_phi();
    const std::size_t nt = np; // square grid keeps products well resolved
    BoundaryField g = g_field(geom, nt);

    std::vector<double> b0(np * nt, 0.0);
    for (std::size_t i = 0; i < np; ++i)
        for (std::size_t k = 3; k <= geom.k_max; ++k) {
            const double coef = ((k % 2 == 0) ? 1.0 : -1.0) /
                                (static_cast<double>(k) - 1.0) *
                                std::pow(eps, double(k) - 3.0);
            const cplx ak = geom.a_k[k - 2][i];
            for (std::size_t m = 0; m < nt; ++m) {
                const double th =
                    2.0 * M_PI * static_cast<double>(m) / static_cast<double>(nt);
                b0[i * nt + m] += coef * (ak * std::polar(1.0, double(k) * th)).real();
            }
        }
    BoundaryField r0 = BoundaryField::from_grid(np, nt, b0);
    r0 *= eps;
    r0 += g;

    // A1 = omega0 (d_phi g - d_theta(Theta_dot g)) - (3/4) d_theta g^2,
    // even theta modes only. The Theta_dot transport of g belongs to the
    // eps^4 balance; without it the residual stalls at fourth order.
    BoundaryField A1 = g.derivative(Axis::Phi);
    BoundaryField tdotg =
        multiply_dealiased(phi_profile_field(geom.orbit.theta_dot, np, nt), g)
            .derivative(Axis::Theta);
    A1 -= tdotg;
    A1 *= geom.omega0();
    BoundaryField g2 = multiply_dealiased(g, g).derivative(Axis::Theta);
    g2 *= 0.75;
    A1 -= g2;

    BoundaryField forcing = A1;
    forcing *= -2.0 * eps;
    BoundaryField r1 = forcing.invert_theta_elliptic(1e-10);

    r1 *= eps;
    r0 += r1;
    r0.project_zero_theta_mean();
    return r0;
}

} // namespace lf::contour
