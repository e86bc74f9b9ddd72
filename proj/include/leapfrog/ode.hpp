#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <stdexcept>
#include <vector>

namespace lf::numerics {

struct OdeOptions {
    double rtol = 1e-12;
    double atol = 1e-12;
    double h0 = 0.0; // 0: choose automatically
    std::size_t max_steps = 20'000'000;
};

struct OdeError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// One accepted step of the continuous extension.
struct DenseStep {
    double t0, h;
    std::vector<double> c1, c2, c3, c4, c5;
};

class DenseSolution {
  public:
    double t_begin() const { return steps_.empty() ? 0.0 : steps_.front().t0; }
    double t_end() const {
        return steps_.empty() ? 0.0 : steps_.back().t0 + steps_.back().h;
    }
    std::size_t dim() const { return steps_.empty() ? 0 : steps_.front().c1.size(); }

    std::vector<double> eval(double t) const {
        const auto& s = locate(t);
        const double th = (t - s.t0) / s.h;
        std::vector<double> y(s.c1.size());
        for (std::size_t i = 0; i < y.size(); ++i)
            y[i] = s.c1[i] +
                   th * (s.c2[i] +
                         (1.0 - th) * (s.c3[i] + th * (s.c4[i] + (1.0 - th) * s.c5[i])));
        return y;
    }

    void push(DenseStep s) { steps_.push_back(std::move(s)); }
    const std::vector<DenseStep>& steps() const { return steps_; }

  private:
    const DenseStep& locate(double t) const {
        if (steps_.empty()) throw OdeError("DenseSolution: empty");
        const bool fwd = steps_.back().h > 0;
        std::size_t lo = 0, hi = steps_.size() - 1;
        while (lo < hi) {
            const std::size_t mid = (lo + hi) / 2;
            const double tend = steps_[mid].t0 + steps_[mid].h;
            if (fwd ? (t <= tend) : (t >= tend))
                hi = mid;
            else
                lo = mid + 1;
        }
        return steps_[lo];
    }

    std::vector<DenseStep> steps_;
};

namespace detail {

inline double scaled_rms(const std::vector<double>& err, const std::vector<double>& y0,
                         const std::vector<double>& y1, double atol, double rtol) {
    double s = 0.0;
    for (std::size_t i = 0; i < err.size(); ++i) {
        const double sc = atol + rtol * std::max(std::abs(y0[i]), std::abs(y1[i]));
        const double q = err[i] / sc;
        s += q * q;
    }
    return std::sqrt(s / static_cast<double>(err.size()));
}

} // namespace detail

// Dormand-Prince 5(4) with the classical quartic continuous extension.
// rhs signature: rhs(t, y, dydt). Integrates from t0 to t1 (either direction)
// and optionally records the dense output.
template <class RHS>
std::vector<double> ode_integrate(RHS&& rhs, std::vector<double> y, double t0, double t1,
                                  const OdeOptions& opt = {}, DenseSolution* dense = nullptr) {
    static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
    static constexpr double a21 = 1.0 / 5;
    static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                            a53 = 64448.0 / 6561, a54 = -212.0 / 729;
    static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                            a64 = 49.0 / 176, a65 = -5103.0 / 18656;
    static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                            b5 = -2187.0 / 6784, b6 = 11.0 / 84;
    static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                            e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;
    static constexpr double d1 = -12715105075.0 / 11282082432.0,
                            d3 = 87487479700.0 / 32700410799.0,
                            d4 = -10690763975.0 / 1880347072.0,
                            d5 = 701980252875.0 / 199316789632.0,
                            d6 = -1453857185.0 / 822651844.0,
                            d7 = 69997945.0 / 29380423.0;

    if (t1 == t0) return y;
    const double dir = (t1 > t0) ? 1.0 : -1.0;
    const std::size_t n = y.size();
    std::vector<double> k1(n), k2(n), k3(n), k4(n), k5(n), k6(n), k7(n), ytmp(n), y1(n),
        err(n);

    double t = t0;
    rhs(t, y, k1);

    double h = opt.h0;
    if (h == 0.0) {
        // standard startup heuristic from the scaled norms of y and f
        double d0 = 0.0, dd1 = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double sc = opt.atol + opt.rtol * std::abs(y[i]);
            d0 += (y[i] / sc) * (y[i] / sc);
            dd1 += (k1[i] / sc) * (k1[i] / sc);
        }
        d0 = std::sqrt(d0 / n);
        dd1 = std::sqrt(dd1 / n);
        h = (d0 < 1e-5 || dd1 < 1e-5) ? 1e-6 : 0.01 * d0 / dd1;
        h = std::min(h, std::abs(t1 - t0));
    }
    h *= dir;

    std::size_t steps = 0;
    while (dir * (t1 - t) > 0.0) {
        if (++steps > opt.max_steps) throw OdeError("ode_integrate: step budget exhausted");
        if (dir * (t + h - t1) > 0.0) h = t1 - t;
        if (std::abs(h) < 1e-15 * std::max(1.0, std::abs(t)))
            throw OdeError("ode_integrate: step size underflow");

        for (std::size_t i = 0; i < n; ++i) ytmp[i] = y[i] + h * a21 * k1[i];
        rhs(t + c2 * h, ytmp, k2);
        for (std::size_t i = 0; i < n; ++i)
            ytmp[i] = y[i] + h * (a31 * k1[i] + a32 * k2[i]);
        rhs(t + c3 * h, ytmp, k3);
        for (std::size_t i = 0; i < n; ++i)
            ytmp[i] = y[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
        rhs(t + c4 * h, ytmp, k4);
        for (std::size_t i = 0; i < n; ++i)
            ytmp[i] = y[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
        rhs(t + c5 * h, ytmp, k5);
        for (std::size_t i = 0; i < n; ++i)
            ytmp[i] = y[i] + h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] +
                                  a65 * k5[i]);
        rhs(t + h, ytmp, k6);
        for (std::size_t i = 0; i < n; ++i)
            y1[i] = y[i] +
                    h * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] + b5 * k5[i] + b6 * k6[i]);
        rhs(t + h, y1, k7);

        for (std::size_t i = 0; i < n; ++i) {
            err[i] = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] +
                          e7 * k7[i]);
            if (!std::isfinite(y1[i])) throw OdeError("ode_integrate: non-finite state");
        }
        const double enorm = detail::scaled_rms(err, y, y1, opt.atol, opt.rtol);

        if (enorm <= 1.0) {
            if (dense) {
                DenseStep s;
                s.t0 = t;
                s.h = h;
                s.c1 = y;
                s.c2.resize(n);
                s.c3.resize(n);
                s.c4.resize(n);
                s.c5.resize(n);
                for (std::size_t i = 0; i < n; ++i) {
                    const double dy = y1[i] - y[i];
                    s.c2[i] = dy;
                    s.c3[i] = h * k1[i] - dy;
                    s.c4[i] = dy - h * k7[i] - s.c3[i];
                    s.c5[i] = h * (d1 * k1[i] + d3 * k3[i] + d4 * k4[i] + d5 * k5[i] +
                                   d6 * k6[i] + d7 * k7[i]);
                }
                dense->push(std::move(s));
            }
            t += h;
            y.swap(y1);
            k1.swap(k7); // FSAL
        }
        const double fac = std::clamp(0.9 * std::pow(std::max(enorm, 1e-10), -0.2), 0.2, 5.0);
        h *= fac;
    }
    return y;
}

// First root of g(t, y(t)) in (t_begin, t_end] located on the dense output by
// sampling the accepted steps and bisecting to tol_t.
template <class G>
double locate_event(const DenseSolution& dense, G&& g, double tol_t = 1e-13) {
    const auto& steps = dense.steps();
    if (steps.empty()) throw OdeError("locate_event: empty solution");
    double ta = dense.t_begin();
    double ga = g(ta, dense.eval(ta));
    for (const auto& s : steps) {
        // subsample each step so sign changes inside long steps are not missed
        constexpr int sub = 8;
        for (int q = 1; q <= sub; ++q) {
            const double tb = s.t0 + s.h * q / sub;
            const double gb = g(tb, dense.eval(tb));
            if (ga == 0.0) return ta;
            if (ga * gb < 0.0) {
                double lo = ta, hi = tb, glo = ga;
                while (std::abs(hi - lo) > tol_t) {
                    const double mid = 0.5 * (lo + hi);
                    const double gm = g(mid, dense.eval(mid));
                    if (glo * gm <= 0.0)
                        hi = mid;
                    else {
                        lo = mid;
                        glo = gm;
                    }
                }
                return 0.5 * (lo + hi);
            }
            ta = tb;
            ga = gb;
        }
    }
    throw OdeError("locate_event: no sign change on the integration window");
}

} // namespace lf::numerics
