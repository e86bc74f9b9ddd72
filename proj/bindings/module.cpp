#include <pybind11/complex.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "leapfrog/contour.hpp"
#include "leapfrog/elliptic.hpp"
#include "leapfrog/monodromy.hpp"
#include "leapfrog/pointvortex.hpp"

namespace py = pybind11;
namespace pv = lf::pointvortex;
namespace ct = lf::contour;
namespace mono = lf::monodromy;
using lf::numerics::BoundaryField;

namespace {

pv::VortexParams make_params(double y0, double xi0, double eps) {
    pv::VortexParams p{y0, xi0, eps};
    p.validate();
    return p;
}

py::array_t<double> field_to_array(const BoundaryField& f) {
    const auto g = f.grid();
    py::array_t<double> out({f.n_phi(), f.n_theta()});
    std::copy(g.begin(), g.end(), out.mutable_data());
    return out;
}

BoundaryField array_to_field(py::array_t<double, py::array::c_style | py::array::forcecast> a) {
    if (a.ndim() != 2) throw std::invalid_argument("field array must be 2-d");
    const std::size_t np = a.shape(0), nt = a.shape(1);
    std::vector<double> g(a.data(), a.data() + np * nt);
    return BoundaryField::from_grid(np, nt, g);
}

py::array_t<std::complex<double>> mat_to_array(const mono::Mat4& m) {
    py::array_t<std::complex<double>> out({4, 4});
    std::copy(m.begin(), m.end(), out.mutable_data());
    return out;
}

} // namespace

PYBIND11_MODULE(pyleapfrog, m) {
    m.doc() = "leapfrogging vortex quartet laboratory";

    m.def("elliptic_K", &lf::numerics::elliptic_K, py::arg("m"));
    m.def("elliptic_E", &lf::numerics::elliptic_E, py::arg("m"));

    m.def(
        "period",
        [](double y0, double xi0, const std::string& method) {
            const auto p = make_params(y0, xi0, 0.0);
            if (method == "quadrature") return pv::period_quadrature(p);
            if (method == "closed_form") return pv::period_closed_form(p);
            if (method == "numeric") return pv::period_numeric(p);
            throw std::invalid_argument("method must be quadrature|closed_form|numeric");
        },
        py::arg("y0"), py::arg("xi0"), py::arg("method") = "quadrature");

    m.def("eta_quarter",
          [](double y0, double xi0) { return pv::eta_quarter(make_params(y0, xi0, 0.0)); });
    m.def("hamiltonian", &pv::hamiltonian, py::arg("eta"), py::arg("xi"), py::arg("y0"));

    m.def(
        "integrate_orbit",
        [](double y0, double xi0, double t_end, double tol, std::size_t n) {
            const auto orbit = pv::integrate_orbit(make_params(y0, xi0, 0.0), t_end, tol, n);
            py::dict out;
            std::vector<double> t, eta, xi, x0, H;
            for (const auto& s : orbit.samples) {
                t.push_back(s.t);
                eta.push_back(s.eta);
                xi.push_back(s.xi);
                x0.push_back(s.x0);
                H.push_back(s.H);
            }
            out["t"] = t;
            out["eta"] = eta;
            out["xi"] = xi;
            out["x0"] = x0;
            out["H"] = H;
            out["hamiltonian_drift"] = orbit.hamiltonian_drift;
            return out;
        },
        py::arg("y0"), py::arg("xi0"), py::arg("t_end"), py::arg("tol") = 1e-12,
        py::arg("n_samples") = 257);

    m.def(
        "solve_q_theta",
        [](double y0, double xi0, std::size_t n_phi) {
            const auto orb = pv::solve_q_theta(make_params(y0, xi0, 0.0), n_phi);
            py::dict out;
            out["q"] = orb.q;
            out["Theta"] = orb.theta_big;
            out["Theta_dot"] = orb.theta_dot;
            out["omega0"] = orb.omega0;
            out["period"] = orb.period;
            return out;
        },
        py::arg("y0"), py::arg("xi0"), py::arg("n_phi") = 128);

    m.def(
        "g0_series",
        [](double y0, double xi0, double eps, std::size_t n_phi, std::size_t k_max) {
            const auto orb = pv::solve_q_theta(make_params(y0, xi0, eps), n_phi);
            const auto geom = ct::make_geometry(orb, k_max);
            return field_to_array(ct::g0_series(eps, geom, n_phi).field);
        },
        py::arg("y0"), py::arg("xi0"), py::arg("eps"), py::arg("n_phi") = 128,
        py::arg("k_max") = 20);

    m.def(
        "approx_solution",
        [](double y0, double xi0, double eps, std::size_t n_phi, std::size_t k_max) {
            const auto orb = pv::solve_q_theta(make_params(y0, xi0, eps), n_phi);
            const auto geom = ct::make_geometry(orb, k_max);
            return field_to_array(ct::approx_solution(eps, geom));
        },
        py::arg("y0"), py::arg("xi0"), py::arg("eps"), py::arg("n_phi") = 64,
        py::arg("k_max") = 20);

    m.def(
        "residual_norm",
        [](double y0, double xi0, double eps,
           py::array_t<double, py::array::c_style | py::array::forcecast> r,
           std::size_t n_l) {
            const auto field = array_to_field(r);
            const auto orb = pv::solve_q_theta(make_params(y0, xi0, eps), field.n_phi());
            const auto geom = ct::make_geometry(orb, 20);
            ct::PsiOptions opt;
            opt.n_l = n_l;
            return ct::G_residual(eps, field, geom, opt).sup_norm();
        },
        py::arg("y0"), py::arg("xi0"), py::arg("eps"), py::arg("r"), py::arg("n_l") = 48);

    m.def("a0_exponential",
          [](double phi) { return mat_to_array(mono::a0_exponential(phi)); });
    m.def("a0_det_gap_identity", &mono::a0_det_gap_identity, py::arg("phi"));
    m.def("det_gap", &mono::det_gap_at, py::arg("y0"), py::arg("xi0"), py::arg("eps") = 0.0,
          py::arg("c2") = 0.0, py::arg("tol") = 1e-11);

    m.def(
        "monodromy_matrix",
        [](double y0, double xi0, double eps, double c2) {
            const auto p = make_params(y0, xi0, eps);
            const auto orb = pv::solve_q_theta(p, 64);
            const auto rep = mono::fundamental_matrix(mono::build_system(eps, p, orb, c2));
            py::dict out;
            out["M"] = mat_to_array(rep.M);
            out["det_gap"] = rep.det_gap;
            out["structure_ok"] = rep.structure_ok;
            return out;
        },
        py::arg("y0"), py::arg("xi0"), py::arg("eps") = 0.0, py::arg("c2") = 0.0);

    m.def(
        "divisor",
        [](int j, int l, double y0, double xi0, double eps, double delta, double tau,
           int k) {
            const auto res = mono::divisor(j, l, make_params(y0, xi0, eps), delta, tau, k);
            return py::make_tuple(res.value, res.excluded);
        },
        py::arg("j"), py::arg("l"), py::arg("y0"), py::arg("xi0"), py::arg("eps"),
        py::arg("delta") = 0.3, py::arg("tau") = 1.5, py::arg("k") = 2);

    m.def(
        "cantor_measure",
        [](double y0, double eps, double delta, double tau, double xi_lo, double xi_hi,
           int j_max) {
            const auto scan =
                mono::cantor_measure(y0, eps, delta, tau, xi_lo, xi_hi, j_max);
            py::dict out;
            out["measure"] = scan.measure;
            out["lambda"] = scan.lambda;
            out["interval_count"] = scan.interval_count;
            out["truncation_warning"] = scan.truncation_warning;
            return out;
        },
        py::arg("y0"), py::arg("eps"), py::arg("delta") = 0.3, py::arg("tau") = 1.5,
        py::arg("xi_lo") = 0.12, py::arg("xi_hi") = 0.18, py::arg("j_max") = 128);
}
