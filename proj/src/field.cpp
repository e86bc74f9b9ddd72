#include "leapfrog/field.hpp"

#include <algorithm>
#include <cmath>

#include <json.hpp>

namespace lf::numerics {

BoundaryField::BoundaryField(std::size_t n_phi, std::size_t n_theta)
    : n_phi_(n_phi), n_theta_(n_theta), coef_(n_phi * n_theta, cplx(0.0, 0.0)) {
    if (!is_power_of_two(n_phi) || !is_power_of_two(n_theta))
        throw std::invalid_argument("BoundaryField: grid sizes must be powers of two");
}

std::size_t BoundaryField::index(int l, int j) const {
    const int np = static_cast<int>(n_phi_), nt = static_cast<int>(n_theta_);
    const int li = (l % np + np) % np;
    const int ji = (j % nt + nt) % nt;
    return static_cast<std::size_t>(li) * n_theta_ + static_cast<std::size_t>(ji);
}

cplx BoundaryField::coef(int l, int j) const { return coef_[index(l, j)]; }
void BoundaryField::set_coef(int l, int j, cplx v) { coef_[index(l, j)] = v; }

BoundaryField BoundaryField::from_grid(std::size_t n_phi, std::size_t n_theta,
                                       const std::vector<double>& values) {
    BoundaryField f(n_phi, n_theta);
    if (values.size() != n_phi * n_theta)
        throw std::invalid_argument("BoundaryField::from_grid: size mismatch");
    for (std::size_t i = 0; i < values.size(); ++i) f.coef_[i] = values[i];
    // theta rows, then phi columns
    for (std::size_t i = 0; i < n_phi; ++i)
        fft_inplace(f.coef_.data() + i * n_theta, n_theta, -1);
    std::vector<cplx> col(n_phi);
    for (std::size_t m = 0; m < n_theta; ++m) {
        for (std::size_t i = 0; i < n_phi; ++i) col[i] = f.coef_[i * n_theta + m];
        fft_inplace(col.data(), n_phi, -1);
        for (std::size_t i = 0; i < n_phi; ++i) f.coef_[i * n_theta + m] = col[i];
    }
    const double inv = 1.0 / static_cast<double>(n_phi * n_theta);
    for (auto& c : f.coef_) c *= inv;
    f.real_ = true;
    return f;
}

BoundaryField BoundaryField::from_spectral(std::size_t n_phi, std::size_t n_theta,
                                           std::vector<cplx> coeffs, bool is_real) {
    BoundaryField f(n_phi, n_theta);
    if (coeffs.size() != n_phi * n_theta)
        throw std::invalid_argument("BoundaryField::from_spectral: size mismatch");
    f.coef_ = std::move(coeffs);
    f.real_ = is_real;
    return f;
}

std::vector<double> BoundaryField::grid() const {
    std::vector<cplx> work = coef_;
    std::vector<cplx> col(n_phi_);
    for (std::size_t m = 0; m < n_theta_; ++m) {
        for (std::size_t i = 0; i < n_phi_; ++i) col[i] = work[i * n_theta_ + m];
        fft_inplace(col.data(), n_phi_, +1);
        for (std::size_t i = 0; i < n_phi_; ++i) work[i * n_theta_ + m] = col[i];
    }
    for (std::size_t i = 0; i < n_phi_; ++i)
        fft_inplace(work.data() + i * n_theta_, n_theta_, +1);
    std::vector<double> out(n_phi_ * n_theta_);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = work[i].real();
    return out;
}

double BoundaryField::grid_value(double phi, double theta) const {
    cplx acc(0.0, 0.0);
    const int np = static_cast<int>(n_phi_), nt = static_cast<int>(n_theta_);
    for (int li = 0; li < np; ++li) {
        const int l = fft_freq(static_cast<std::size_t>(li), n_phi_);
        for (int ji = 0; ji < nt; ++ji) {
            const int j = fft_freq(static_cast<std::size_t>(ji), n_theta_);
            const double arg = l * phi + j * theta;
            acc += coef_[static_cast<std::size_t>(li) * n_theta_ + ji] *
                   cplx(std::cos(arg), std::sin(arg));
        }
    }
    return acc.real();
}

BoundaryField BoundaryField::hilbert_theta() const {
    BoundaryField out = *this;
    for (std::size_t li = 0; li < n_phi_; ++li)
        for (std::size_t ji = 0; ji < n_theta_; ++ji) {
            const int j = fft_freq(ji, n_theta_);
            const double s = (j > 0) ? 1.0 : (j < 0 ? -1.0 : 0.0);
            out.coef_[li * n_theta_ + ji] *= cplx(0.0, s);
        }
    return out;
}

BoundaryField BoundaryField::derivative(Axis axis, bool dealias) const {
    BoundaryField out = *this;
    if (dealias) out.dealias_two_thirds();
    for (std::size_t li = 0; li < n_phi_; ++li) {
        const int l = fft_freq(li, n_phi_);
        for (std::size_t ji = 0; ji < n_theta_; ++ji) {
            const int j = fft_freq(ji, n_theta_);
            int k = (axis == Axis::Phi) ? l : j;
            // drop the unpaired Nyquist mode so real fields stay real
            if (axis == Axis::Phi && li == n_phi_ / 2) k = 0;
            if (axis == Axis::Theta && ji == n_theta_ / 2) k = 0;
            out.coef_[li * n_theta_ + ji] *= cplx(0.0, static_cast<double>(k));
        }
    }
    return out;
}

BoundaryField BoundaryField::invert_theta_elliptic(double tol) const {
    BoundaryField out(n_phi_, n_theta_);
    out.real_ = real_;
    for (int j : {-1, 0, 1}) {
        if (max_abs_mode_j(j) > tol)
            throw DegenerateModeError(
                "invert_theta_elliptic: forcing has content on kernel mode j=" +
                std::to_string(j));
    }
    for (std::size_t li = 0; li < n_phi_; ++li)
        for (std::size_t ji = 0; ji < n_theta_; ++ji) {
            const int j = fft_freq(ji, n_theta_);
            if (j >= -1 && j <= 1) continue;
            const double sym = static_cast<double>(j) - (j > 0 ? 1.0 : -1.0);
            out.coef_[li * n_theta_ + ji] =
                coef_[li * n_theta_ + ji] / cplx(0.0, sym);
        }
    return out;
}

BoundaryField& BoundaryField::dealias_two_thirds() {
    const int jcut = static_cast<int>(n_theta_) / 3;
    const int lcut = static_cast<int>(n_phi_) / 3;
    for (std::size_t li = 0; li < n_phi_; ++li)
        for (std::size_t ji = 0; ji < n_theta_; ++ji) {
            const int l = fft_freq(li, n_phi_);
            const int j = fft_freq(ji, n_theta_);
            if (std::abs(l) > lcut || std::abs(j) > jcut)
                coef_[li * n_theta_ + ji] = cplx(0.0, 0.0);
        }
    return *this;
}

BoundaryField& BoundaryField::project_zero_theta_mean() {
    for (std::size_t li = 0; li < n_phi_; ++li) coef_[li * n_theta_] = cplx(0.0, 0.0);
    return *this;
}

double BoundaryField::max_abs_mode_j(int j) const {
    double m = 0.0;
    for (std::size_t li = 0; li < n_phi_; ++li)
        m = std::max(m, std::abs(coef_[index(fft_freq(li, n_phi_), j)]));
    return m;
}

double BoundaryField::sup_norm() const {
    const auto g = grid();
    double m = 0.0;
    for (double v : g) m = std::max(m, std::abs(v));
    return m;
}

double BoundaryField::l2_norm() const {
    double s = 0.0;
    for (const auto& c : coef_) s += std::norm(c);
    return std::sqrt(s);
}

void BoundaryField::check_compatible(const BoundaryField& o) const {
    if (n_phi_ != o.n_phi_ || n_theta_ != o.n_theta_)
        throw std::invalid_argument("BoundaryField: incompatible grids");
}

BoundaryField& BoundaryField::operator+=(const BoundaryField& o) {
    check_compatible(o);
    for (std::size_t i = 0; i < coef_.size(); ++i) coef_[i] += o.coef_[i];
    real_ = real_ && o.real_;
    return *this;
}

BoundaryField& BoundaryField::operator-=(const BoundaryField& o) {
    check_compatible(o);
    for (std::size_t i = 0; i < coef_.size(); ++i) coef_[i] -= o.coef_[i];
    real_ = real_ && o.real_;
    return *this;
}

BoundaryField& BoundaryField::operator*=(double s) {
    for (auto& c : coef_) c *= s;
    return *this;
}

BoundaryField multiply_dealiased(const BoundaryField& a, const BoundaryField& b) {
    BoundaryField ad = a, bd = b;
    ad.dealias_two_thirds();
    bd.dealias_two_thirds();
    const auto ga = ad.grid();
    const auto gb = bd.grid();
    std::vector<double> gp(ga.size());
    for (std::size_t i = 0; i < ga.size(); ++i) gp[i] = ga[i] * gb[i];
    return BoundaryField::from_grid(a.n_phi(), a.n_theta(), gp);
}

std::string BoundaryField::to_json() const {
    nlohmann::json rec;
    rec["n_phi"] = n_phi_;
    rec["n_theta"] = n_theta_;
    rec["real"] = real_;
    std::vector<double> flat;
    flat.reserve(2 * coef_.size());
    for (const auto& c : coef_) {
        flat.push_back(c.real());
        flat.push_back(c.imag());
    }
    rec["coeffs"] = std::move(flat);
    return rec.dump();
}

BoundaryField BoundaryField::from_json(const std::string& text) {
    const auto rec = nlohmann::json::parse(text);
    const std::size_t np = rec.at("n_phi").get<std::size_t>();
    const std::size_t nt = rec.at("n_theta").get<std::size_t>();
    const auto flat = rec.at("coeffs").get<std::vector<double>>();
    if (flat.size() != 2 * np * nt)
        throw std::invalid_argument("BoundaryField::from_json: coefficient count mismatch");
    std::vector<cplx> coeffs(np * nt);
    for (std::size_t i = 0; i < coeffs.size(); ++i)
        coeffs[i] = cplx(flat[2 * i], flat[2 * i + 1]);
    return from_spectral(np, nt, std::move(coeffs), rec.at("real").get<bool>());
}

} // namespace lf::numerics
