"""Kahler structure on the pure-state sphere.

Oracles: direct inner-product formulas recomputed inline, plus the standard
qubit results (round metric of radius 1/2 after projectivization, scaled by
2*hbar here).
"""

import numpy as np

from qgeo.kahler import (fs_hermitian, fs_metric, fs_symplectic, metric_G,
                         project_perp, symplectic_Omega)
from qgeo.sampling import random_pure

from conftest import make_rng


def _rand_tangent(rng, psi):
    z = rng.normal(size=psi.shape[0]) + 1j * rng.normal(size=psi.shape[0])
    # tangent to the unit sphere at psi: Re<psi|z> = 0
    return z - psi * np.vdot(psi, z).real


def test_metric_and_symplectic_are_real_bilinear_forms():
    rng = make_rng(21)
    for _ in range(50):
        n = int(rng.integers(2, 6))
        x = rng.normal(size=n) + 1j * rng.normal(size=n)
        y = rng.normal(size=n) + 1j * rng.normal(size=n)
        hbar = float(rng.uniform(0.5, 2.0))
        # oracle: independent recomputation from the definition
        assert np.isclose(metric_G(x, y, hbar), 2 * hbar * np.vdot(x, y).real)
        assert np.isclose(symplectic_Omega(x, y, hbar),
                          2 * hbar * np.vdot(x, y).imag)
        assert np.isclose(symplectic_Omega(x, y, hbar),
                          -symplectic_Omega(y, x, hbar))


def test_fs_hermitian_projects_out_psi():
    rng = make_rng(22)
    for _ in range(50):
        n = int(rng.integers(2, 7))
        psi = random_pure(rng, n)
        x = _rand_tangent(rng, psi)
        y = _rand_tangent(rng, psi)
        h = fs_hermitian(psi, x, y, hbar=1.0)
        # oracle: h(x, y) = 2<x_perp|y_perp> with explicit projection
        xp, yp = project_perp(psi, x), project_perp(psi, y)
        assert np.isclose(h, 2 * np.vdot(xp, yp), atol=1e-12)
        assert np.isclose(fs_metric(psi, x, y), h.real, atol=1e-12)
        assert np.isclose(fs_symplectic(psi, x, y), h.imag, atol=1e-12)
        # vertical direction i*psi carries no Fubini-Study length
        assert abs(fs_metric(psi, 1j * psi, x)) < 1e-12


def test_qubit_round_sphere():
    # great circle psi(t) = (cos t/2, sin t/2): FS speed is 1/2 in the
    # projective metric, so fs_metric of the velocity is 2*hbar*(1/4).
    for t in np.linspace(0.1, 3.0, 7):
        psi = np.array([np.cos(t / 2), np.sin(t / 2)], dtype=complex)
        dpsi = 0.5 * np.array([-np.sin(t / 2), np.cos(t / 2)], dtype=complex)
        assert np.isclose(fs_metric(psi, dpsi, dpsi, hbar=1.0), 0.5, atol=1e-12)


def test_kahler_compatibility():
    # Omega(x, y) = G(ix, y): the complex structure relates the two forms.
    rng = make_rng(23)
    for _ in range(50):
        psi = random_pure(rng, 4)
        x = _rand_tangent(rng, psi)
        y = _rand_tangent(rng, psi)
        assert np.isclose(fs_symplectic(psi, x, y),
                          fs_metric(psi, 1j * x, y), atol=1e-12)
