"""Smoke tests for the python bindings."""

import math

import pyleapfrog as lf


def test_elliptic():
    assert abs(lf.elliptic_K(0.0) - math.pi / 2) < 1e-14
    assert abs(lf.elliptic_E(1.0) - 1.0) < 1e-15


def test_period_bracket():
    for xi0 in (0.1, 0.3, 0.5):
        T = lf.period(1.0, xi0)
        lo = 2 * math.pi * xi0**2
        hi = lo / (1 - 2 * xi0**2)
        assert lo <= T <= hi
        assert abs(lf.period(1.0, xi0, "closed_form") - T) < 1e-8 * T


def test_orbit_conservation():
    T = lf.period(1.0, 0.5)
    orbit = lf.integrate_orbit(1.0, 0.5, T)
    assert orbit["hamiltonian_drift"] < 1e-9
    assert abs(orbit["eta"][-1]) < 1e-6
    assert abs(orbit["xi"][-1] - 0.5) < 1e-6


def test_qtheta():
    orb = lf.solve_q_theta(1.0, 0.5, 128)
    assert abs(orb["q"][0] - 0.25) < 1e-12
    assert abs(orb["Theta"][0] - math.pi / 2) < 1e-12
    assert orb["omega0"] * orb["period"] - 2 * math.pi < 1e-10


def test_monodromy_det_gap():
    assert abs(lf.a0_det_gap_identity(2 * math.pi) - 0.121262) < 2e-3
    assert abs(lf.det_gap(1.0, 0.05) - 0.121262) < 5e-3


def test_approx_solution_residual():
    r = lf.approx_solution(1.0, 0.5, 0.1, 64)
    assert r.shape == (64, 64)
    n_eps = lf.residual_norm(1.0, 0.5, 0.1, 0.1 * r)
    r2 = lf.approx_solution(1.0, 0.5, 0.05, 64)
    n_half = lf.residual_norm(1.0, 0.5, 0.05, 0.05 * r2)
    assert math.log2(n_eps / n_half) > 4.5


def test_divisor_and_cantor():
    value, excluded = lf.divisor(2, 0, 1.0, 0.15, 0.0)
    assert abs(value - 0.5) < 1e-12
    assert not excluded
    m1 = lf.cantor_measure(1.0, 0.1, j_max=64)
    m2 = lf.cantor_measure(1.0, 0.05, j_max=64)
    assert m2["measure"] < m1["measure"]


if __name__ == "__main__":
    fails = 0
    for name, fn in sorted(globals().items()):
        if name.startswith("test_") and callable(fn):
            try:
                fn()
                print(f"PASS {name}")
            except AssertionError as exc:
                print(f"FAIL {name}: {exc}")
                fails += 1
    raise SystemExit(1 if fails else 0)
