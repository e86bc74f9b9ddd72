#include <algorithm>
#include <cmath>

#include "leapfrog/contour.hpp"
#include "leapfrog/fft.hpp"

namespace lf::contour {

using lf::numerics::cplx;

double polygon_area_spectral(const std::vector<cplx>& w) {
    // A = (1/2) Im oint conj(w) dw with the spectral derivative
    const std::size_t n = w.size();
    std::vector<cplx> what = w;
    numerics::fft_forward(what);
    std::vector<cplx> wp(n);
    for (std::size_t k = 0; k < n; ++k) {
        int f = numerics::fft_freq(k, n);
        if (k == n / 2) f = 0;
        wp[k] = what[k] * cplx(0.0, double(f));
    }
    numerics::fft_inverse(wp);
    double s = 0.0;
    for (std::size_t j = 0; j < n; ++j) s += (std::conj(w[j]) * wp[j]).imag();
    return 0.5 * s * 2.0 * M_PI / static_cast<double>(n);
}

cplx polygon_centroid_spectral(const std::vector<cplx>& w) {
    // int_D z dA = (1/2i) oint |z|^2 z' ... evaluated with conj(w) w w'
    const std::size_t n = w.size();
    std::vector<cplx> what = w;
    numerics::fft_forward(what);
    std::vector<cplx> wp(n);
    for (std::size_t k = 0; k < n; ++k) {
        int f = numerics::fft_freq(k, n);
        if (k == n / 2) f = 0;
        wp[k] = what[k] * cplx(0.0, double(f));
    }
    numerics::fft_inverse(wp);
    cplx s(0.0, 0.0);
    for (std::size_t j = 0; j < n; ++j) s += std::conj(w[j]) * w[j] * wp[j];
    s *= 2.0 * M_PI / static_cast<double>(n) / cplx(0.0, 2.0);
    return s / polygon_area_spectral(w);
}

namespace {

struct SourcePatch {
    std::vector<cplx> w;       // nodes
    std::vector<cplx> wp;      // spectral d w / d label
    std::vector<cplx> logconv; // exact convolution of log|2 sin| against wp
};

SourcePatch prepare_source(const std::vector<cplx>& nodes) {
    SourcePatch s;
    s.w = nodes;
    const std::size_t n = nodes.size();
    std::vector<cplx> what = nodes;
    numerics::fft_forward(what);
    std::vector<cplx> dhat(n), lhat(n);
    for (std::size_t k = 0; k < n; ++k) {
        int f = numerics::fft_freq(k, n);
        if (k == n / 2) f = 0;
        dhat[k] = what[k] * cplx(0.0, double(f));
        lhat[k] = (f == 0) ? cplx(0.0, 0.0) : dhat[k] * (-M_PI / std::abs(double(f)));
    }
    s.wp = dhat;
    numerics::fft_inverse(s.wp);
    s.logconv = lhat;
    numerics::fft_inverse(s.logconv);
    return s;
}

// oint log|z - w| dw for a target off the source boundary
cplx contour_log_integral(cplx z, const SourcePatch& s) {
    const std::size_t n = s.w.size();
    cplx acc(0.0, 0.0);
    for (std::size_t j = 0; j < n; ++j)
        acc += 0.5 * std::log(std::norm(z - s.w[j])) * s.wp[j];
    return acc * 2.0 * M_PI / static_cast<double>(n);
}

// same integral for the target sitting at node i of the source boundary
cplx contour_log_integral_self(std::size_t i, const SourcePatch& s) {
    const std::size_t n = s.w.size();
    const cplx z = s.w[i];
    cplx acc(0.0, 0.0);
    for (std::size_t j = 0; j < n; ++j) {
        double smooth;
        if (j == i) {
            smooth = std::log(std::abs(s.wp[i]));
        } else {
            const double ref = std::abs(
                2.0 * std::sin(M_PI * (double(j) - double(i)) / static_cast<double>(n)));
            smooth = std::log(std::abs(z - s.w[j]) / ref);
        }
        acc += smooth * s.wp[j];
    }
    return acc * 2.0 * M_PI / static_cast<double>(n) + s.logconv[i];
}

// velocities at the nodes of both upper patches, induced by the four patches
// of vorticity +-1/eps^2 (lower two are the complex conjugates)
std::array<std::vector<cplx>, 2> pair_velocities(
    const std::array<std::vector<cplx>, 2>& patches, double eps) {
    std::array<SourcePatch, 2> src{prepare_source(patches[0]),
                                   prepare_source(patches[1])};
    const double pref = -1.0 / (2.0 * M_PI * eps * eps);
    std::array<std::vector<cplx>, 2> vel;
    for (int a = 0; a < 2; ++a) {
        const std::size_t n = patches[a].size();
        vel[a].resize(n);
        for (std::size_t i = 0; i < n; ++i) {
            const cplx z = patches[a][i];
            const cplx zc = std::conj(z);
            cplx Q = contour_log_integral_self(i, src[a]);
            Q += contour_log_integral(z, src[1 - a]);
            Q += std::conj(contour_log_integral(zc, src[0]));
            Q += std::conj(contour_log_integral(zc, src[1]));
            vel[a][i] = pref * Q;
        }
    }
    return vel;
}

std::vector<cplx> resample_arclength(const std::vector<cplx>& nodes) {
    const std::size_t n = nodes.size();
    std::vector<cplx> what = nodes;
    numerics::fft_forward(what);
    // grid-scale noise seeded by roundoff grows through the discrete
    // self-interaction; a high-order exponential cutoff plus a roundoff
    // floor keeps the resolved band untouched
    double wmax = 0.0;
    for (const auto& c : what) wmax = std::max(wmax, std::abs(c));
    for (std::size_t k = 0; k < n; ++k) {
        const double f = std::abs(double(numerics::fft_freq(k, n)));
        what[k] *= std::exp(-36.0 * std::pow(f / (double(n) / 2.0), 36.0));
        if (std::abs(what[k]) < 1e-13 * wmax) what[k] = cplx(0.0, 0.0);
    }
    // |w'| on a 4x refined label grid for the cumulative arclength
    const std::size_t nf = 4 * n;
    std::vector<double> speed(nf);
    for (std::size_t q = 0; q < nf; ++q) {
        const double s = 2.0 * M_PI * static_cast<double>(q) / static_cast<double>(nf);
        cplx d(0.0, 0.0);
        for (std::size_t k = 0; k < n; ++k) {
            int f = numerics::fft_freq(k, n);
            if (k == n / 2) f = 0;
            d += what[k] * cplx(0.0, double(f)) * std::polar(1.0, f * s);
        }
        speed[q] = std::abs(d);
    }
    std::vector<double> cum(nf + 1, 0.0);
    const double h = 2.0 * M_PI / static_cast<double>(nf);
    for (std::size_t q = 0; q < nf; ++q)
        cum[q + 1] = cum[q] + 0.5 * h * (speed[q] + speed[(q + 1) % nf]);
    const double total = cum[nf];
    std::vector<cplx> out(n);
    std::size_t seg = 0;
    for (std::size_t m = 0; m < n; ++m) {
        const double target = total * static_cast<double>(m) / static_cast<double>(n);
        while (seg + 1 < nf && cum[seg + 1] < target) ++seg;
        const double frac = (target - cum[seg]) / std::max(cum[seg + 1] - cum[seg], 1e-300);
        const double s = h * (static_cast<double>(seg) + frac);
        cplx v(0.0, 0.0);
        for (std::size_t k = 0; k < n; ++k) {
            const int f = numerics::fft_freq(k, n);
            v += what[k] * std::polar(1.0, f * s);
        }
        out[m] = v;
    }
    return out;
}

bool star_shaped(const std::vector<cplx>& w, cplx c) {
    const std::size_t n = w.size();
    double winding = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        const cplx a = w[j] - c, b = w[(j + 1) % n] - c;
        const double d = std::arg(b / a);
        if (!(std::abs(d) < M_PI / 2)) return false;
        winding += d;
    }
    return std::abs(winding - 2.0 * M_PI) < 1e-6;
}

double min_gap(const std::vector<cplx>& a, const std::vector<cplx>& b) {
    double g = std::numeric_limits<double>::max();
    for (const auto& x : a)
        for (const auto& y : b) g = std::min(g, std::abs(x - y));
    return g;
}

double mode2_amplitude(const std::vector<cplx>& w, cplx c, double eps) {
    // |mode 2| of the scaled radius deviation around the centroid; nodes are
    // near-uniform in angle after arclength redistribution, so a trapezoid
    // over the sorted polar angles is adequate
    const std::size_t n = w.size();
    std::vector<std::pair<double, double>> pts(n); // (alpha, rho)
    for (std::size_t j = 0; j < n; ++j)
        pts[j] = {std::arg(w[j] - c), std::abs(w[j] - c) / eps};
    std::sort(pts.begin(), pts.end());
    cplx acc(0.0, 0.0);
    for (std::size_t j = 0; j < n; ++j) {
        const auto& [al, rho] = pts[j];
        const double next = (j + 1 < n) ? pts[j + 1].first : pts[0].first + 2.0 * M_PI;
        const double prev = (j > 0) ? pts[j - 1].first : pts[n - 1].first - 2.0 * M_PI;
        const double wgt = 0.5 * (next - prev);
        acc += rho * std::polar(1.0, -2.0 * al) * wgt;
    }
    return std::abs(acc) / (2.0 * M_PI);
}

} // namespace

PatchTrajectory simulate_patches(const lf::pointvortex::VortexParams& p,
                                 const BoundaryField& r_init, double t_end,
                                 const SimulationOptions& opt) {
    p.validate();
    if (!numerics::is_power_of_two(opt.n_nodes))
        throw std::invalid_argument("simulate_patches: n_nodes must be a power of two");
    const double eps = p.eps;
    if (!(eps > 0.0))
        throw std::invalid_argument("simulate_patches: eps must be positive");

    PatchTrajectory traj;
    traj.params = p;
    traj.eps = eps;
    traj.period = lf::pointvortex::period_quadrature(p);

    const auto orbit = lf::pointvortex::integrate_orbit(p, t_end, opt.tol_orbit, 2);
    auto z_pair = [&](double t) -> std::array<cplx, 2> {
        const auto s = orbit.state_at(t);
        const cplx d = 0.5 * cplx(s.eta, s.xi);
        const cplx g = 0.5 * cplx(s.x0, p.y0);
        return {g + d, g - d};
    };

    // initial boundaries: patch 1 from the phi = 0 slice, patch 2 from the
    // phi = pi slice (the half-period delay ansatz), lower two by conjugation
    const double th0 = M_PI / 2.0;
    std::array<std::vector<cplx>, 2> patches;
    const auto z0 = z_pair(0.0);
    for (int b = 0; b < 2; ++b) {
        patches[b].resize(opt.n_nodes);
        const double phi_slice = (b == 0) ? 0.0 : M_PI;
        const double Th = (b == 0) ? th0 : th0 + M_PI;
        for (std::size_t j = 0; j < opt.n_nodes; ++j) {
            const double th =
                2.0 * M_PI * static_cast<double>(j) / static_cast<double>(opt.n_nodes);
            const double rv = r_init.grid_value(phi_slice, th);
            const double rad = 1.0 + 2.0 * eps * rv;
            if (!(rad > 0.0))
                throw RadiusPositivity("simulate_patches: initial radius not positive");
            patches[b][j] =
                eps * std::sqrt(rad) * std::polar(1.0, th + Th) + z0[b];
        }
    }

    const std::array<double, 2> area0{polygon_area_spectral(patches[0]),
                                      polygon_area_spectral(patches[1])};
    for (double a : area0)
        if (std::abs(a / (M_PI * eps * eps) - 1.0) > 0.01)
            throw SimulationAbort("simulate_patches: initial area off pi eps^2");

    auto record = [&](double t) {
        PatchSnapshot snap;
        snap.t = t;
        snap.boundary = patches;
        const auto zr = z_pair(t);
        for (int b = 0; b < 2; ++b) {
            snap.area[b] = polygon_area_spectral(patches[b]);
            snap.centroid[b] = polygon_centroid_spectral(patches[b]);
            snap.mode2[b] = mode2_amplitude(patches[b], snap.centroid[b], eps);
            snap.z_ref[b] = zr[b];
            if (std::abs(snap.area[b] / area0[b] - 1.0) > opt.area_abort)
                throw SimulationAbort("simulate_patches: area drift beyond limit");
            if (!star_shaped(patches[b], snap.centroid[b]))
                throw SimulationAbort("simulate_patches: boundary self-intersection");
        }
        if (min_gap(patches[0], patches[1]) < 0.05 * eps)
            throw SimulationAbort("simulate_patches: patch collision");
        traj.snapshots.push_back(std::move(snap));
    };

    record(0.0);
    double t = 0.0;
    std::size_t next_snap = 1;
    int since_redistribute = 0;
    while (t < t_end - 1e-14 * t_end) {
        const auto v1 = pair_velocities(patches, eps);
        double vmax = 1e-300, spacing = std::numeric_limits<double>::max();
        for (int b = 0; b < 2; ++b)
            for (std::size_t j = 0; j < opt.n_nodes; ++j) {
                vmax = std::max(vmax, std::abs(v1[b][j]));
                spacing = std::min(spacing,
                                   std::abs(patches[b][(j + 1) % opt.n_nodes] -
                                            patches[b][j]));
            }
        double dt = opt.cfl * spacing / vmax;
        const double t_snap =
            t_end * static_cast<double>(next_snap) / static_cast<double>(opt.n_snapshots);
        dt = std::min(dt, t_snap - t);
        dt = std::min(dt, t_end - t);

        // classical RK4 on the node positions
        std::array<std::vector<cplx>, 2> k1 = v1, stage = patches;
        auto advance = [&](const std::array<std::vector<cplx>, 2>& base,
                           const std::array<std::vector<cplx>, 2>& slope, double f) {
            std::array<std::vector<cplx>, 2> out = base;
            for (int b = 0; b < 2; ++b)
                for (std::size_t j = 0; j < opt.n_nodes; ++j)
                    out[b][j] += f * slope[b][j];
            return out;
        };
        stage = advance(patches, k1, 0.5 * dt);
        const auto k2 = pair_velocities(stage, eps);
        stage = advance(patches, k2, 0.5 * dt);
        const auto k3 = pair_velocities(stage, eps);
        stage = advance(patches, k3, dt);
        const auto k4 = pair_velocities(stage, eps);
        for (int b = 0; b < 2; ++b)
            for (std::size_t j = 0; j < opt.n_nodes; ++j)
                patches[b][j] += dt / 6.0 *
                                 (k1[b][j] + 2.0 * k2[b][j] + 2.0 * k3[b][j] + k4[b][j]);
        t += dt;
        ++traj.steps_taken;

        if (++since_redistribute >= opt.redistribute_every) {
            for (int b = 0; b < 2; ++b) patches[b] = resample_arclength(patches[b]);
            since_redistribute = 0;
        }
        if (t >= t_snap - 1e-14 * t_end) {
            record(t);
            ++next_snap;
        }
    }
    return traj;
}

PatchDiagnostics patch_diagnostics(const PatchTrajectory& traj, const PatchGeometry& geom) {
    PatchDiagnostics d;
    const double eps = traj.eps;
    for (const auto& s : traj.snapshots) {
        d.max_centroid_error =
            std::max(d.max_centroid_error, std::abs(s.centroid[0] - s.z_ref[0]));
        for (int b = 0; b < 2; ++b)
            d.max_area_drift = std::max(
                d.max_area_drift,
                std::abs(s.area[b] / traj.snapshots.front().area[b] - 1.0));
    }

    // hysteresis count of the inner/outer exchange: sign flips of the
    // centroid x-gap once it exceeds the noise threshold
    const double thr = 0.02 * traj.params.xi0;
    int state = 0;
    for (const auto& s : traj.snapshots) {
        const double gap = (s.centroid[0] - s.centroid[1]).real();
        if (std::abs(gap) < thr) continue;
        const int sgn = gap > 0 ? 1 : -1;
        if (state != 0 && sgn != state) ++d.exchange_count;
        state = sgn;
    }

    d.mode2_initial = traj.snapshots.front().mode2[0];
    d.mode2_predicted = 0.5 * eps * eps * std::abs(geom.a_k[0][0]);

    // delay symmetry: the patch SHAPES obey O_{t,2} = O_{t+T/2,1}; compare
    // the centroid offsets from the point-vortex references (the absolute
    // positions differ by the accumulated translation)
    const double T = traj.period;
    auto offset1_at = [&](double t) -> cplx {
        const auto& ss = traj.snapshots;
        for (std::size_t i = 0; i + 1 < ss.size(); ++i)
            if (ss[i + 1].t >= t) {
                const double f = (t - ss[i].t) / (ss[i + 1].t - ss[i].t);
                const cplx a = ss[i].centroid[0] - ss[i].z_ref[0];
                const cplx b = ss[i + 1].centroid[0] - ss[i + 1].z_ref[0];
                return a * (1.0 - f) + b * f;
            }
        return ss.back().centroid[0] - ss.back().z_ref[0];
    };
    const double t_last = traj.snapshots.back().t;
    for (const auto& s : traj.snapshots) {
        if (s.t + 0.5 * T > t_last) break;
        const cplx off2 = s.centroid[1] - s.z_ref[1];
        d.symmetry_defect =
            std::max(d.symmetry_defect, std::abs(off2 - offset1_at(s.t + 0.5 * T)));
    }
    return d;
}

} // namespace lf::contour
