#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "leapfrog/fft.hpp"

namespace lf::numerics {

struct DegenerateModeError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class Axis { Phi, Theta };

// Real scalar field on the 2-torus (phi, theta), canonical representation is
// the spectral one: f(phi, theta) = sum_{l,j} c_{l,j} e^{i(l phi + j theta)}
// with coefficients stored FFT-ordered, row-major [l][j]. Grid sizes are
// powers of two. The "zero spatial mean" constraint of the patch problem is
// the vanishing of every (l, j=0) coefficient.
class BoundaryField {
  public:
    BoundaryField() = default;
    BoundaryField(std::size_t n_phi, std::size_t n_theta);

    static BoundaryField from_grid(std::size_t n_phi, std::size_t n_theta,
                                   const std::vector<double>& values);
    static BoundaryField from_spectral(std::size_t n_phi, std::size_t n_theta,
                                       std::vector<cplx> coeffs, bool is_real);

    std::size_t n_phi() const { return n_phi_; }
    std::size_t n_theta() const { return n_theta_; }
    bool is_real() const { return real_; }

    // signed-wavenumber access, l in [-n_phi/2, n_phi/2), j likewise
    cplx coef(int l, int j) const;
    void set_coef(int l, int j, cplx v);
    const std::vector<cplx>& raw() const { return coef_; }

    // grid samples at phi_i = 2 pi i / n_phi, theta_m = 2 pi m / n_theta,
    // row-major [i][m]
    std::vector<double> grid() const;
    double grid_value(double phi, double theta) const; // direct Fourier sum

    // Fourier multiplier i*sign(j) on theta modes; j = 0 maps to 0
    BoundaryField hilbert_theta() const;
    BoundaryField derivative(Axis axis, bool dealias = false) const;
    // inverse of (d_theta - H) on |j| >= 2; throws DegenerateModeError when
    // modes j in {-1,0,1} exceed tol
    BoundaryField invert_theta_elliptic(double tol = 1e-12) const;

    BoundaryField& dealias_two_thirds();
    BoundaryField& project_zero_theta_mean(); // zero the j = 0 column

    double max_abs_mode_j(int j) const; // max over l of |c_{l,j}|
    double sup_norm() const;
    double l2_norm() const; // sqrt of mean square over the grid (Parseval)

    BoundaryField& operator+=(const BoundaryField& o);
    BoundaryField& operator-=(const BoundaryField& o);
    BoundaryField& operator*=(double s);
    friend BoundaryField operator+(BoundaryField a, const BoundaryField& b) { return a += b; }
    friend BoundaryField operator-(BoundaryField a, const BoundaryField& b) { return a -= b; }
    friend BoundaryField operator*(double s, BoundaryField a) { return a *= s; }

    std::string to_json() const;
    static BoundaryField from_json(const std::string& text);

  private:
    std::size_t index(int l, int j) const;
    void check_compatible(const BoundaryField& o) const;

    std::size_t n_phi_ = 0, n_theta_ = 0;
    std::vector<cplx> coef_;
    bool real_ = true;
};

// pointwise product on the grid; inputs dealiased by the 2/3 rule first
BoundaryField multiply_dealiased(const BoundaryField& a, const BoundaryField& b);

} // namespace lf::numerics
