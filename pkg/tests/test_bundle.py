"""Principal-bundle structure on purification space: connection and metric."""

import numpy as np
import pytest

from qgeo.bundle import (big_G, big_Omega, block_diagonal_part, chi_hat,
                         connection, lie_metric, random_gauge_element,
                         random_gauge_unitary, require_gauge, split,
                         u_sigma_basis, xi_field, xi_perp)
from qgeo.linops import dagger
from qgeo.sampling import random_density, random_hermitian, random_spectrum
from qgeo.states import Purification, Spectrum, p_sigma, purify

from conftest import make_rng


def _random_setting(rng, dim=None, max_multiplicity=2):
    dim = dim or int(rng.integers(2, 6))
    rho = random_density(rng, dim, max_multiplicity=max_multiplicity)
    psi = purify(rho)
    return psi


def _random_tangent(rng, psi):
    """A tangent vector at psi: keeps psi†psi = P(sigma) to first order."""
    n, k = psi.mat.shape
    z = rng.normal(size=(n, k)) + 1j * rng.normal(size=(n, k))
    p = p_sigma(psi.sigma)
    corr = dagger(psi.mat) @ z + dagger(z) @ psi.mat
    return z - 0.5 * psi.mat @ np.linalg.solve(p, corr)


def test_big_forms_oracle():
    rng = make_rng(41)
    for _ in range(30):
        z1 = rng.normal(size=(3, 2)) + 1j * rng.normal(size=(3, 2))
        z2 = rng.normal(size=(3, 2)) + 1j * rng.normal(size=(3, 2))
        hbar = float(rng.uniform(0.5, 2.0))
        inner = np.trace(dagger(z1) @ z2)
        assert np.isclose(big_G(z1, z2, hbar), 2 * hbar * inner.real)
        assert np.isclose(big_Omega(z1, z2, hbar), 2 * hbar * inner.imag)


def test_connection_reproduces_gauge_directions():
    # [DERIVED] A(psi xi) = xi for every xi in u(sigma)
    rng = make_rng(42)
    for _ in range(50):
        psi = _random_setting(rng)
        xi = random_gauge_element(psi.sigma, rng)
        a = connection(psi, psi.mat @ xi)
        assert np.allclose(a, xi, atol=1e-10)


def test_connection_output_is_gauge_valued():
    rng = make_rng(43)
    for _ in range(50):
        psi = _random_setting(rng)
        a = connection(psi, _random_tangent(rng, psi))
        require_gauge(a, psi.sigma, "A")  # anti-Hermitian, block diagonal


def test_connection_equivariance():
    # [DERIVED] A_{psi u}(X u) = u† A_psi(X) u for gauge unitaries u
    rng = make_rng(44)
    for _ in range(30):
        psi = _random_setting(rng)
        x = _random_tangent(rng, psi)
        u = random_gauge_unitary(psi.sigma, rng)
        lhs = connection(Purification(psi.mat @ u, psi.sigma), x @ u)
        rhs = dagger(u) @ connection(psi, x) @ u
        assert np.allclose(lhs, rhs, atol=1e-9)


def test_split_orthogonality_and_reconstruction():
    rng = make_rng(45)
    for _ in range(50):
        psi = _random_setting(rng)
        x = _random_tangent(rng, psi)
        vert, hor = split(psi, x)
        assert np.allclose(vert + hor, x, atol=1e-12)
        assert abs(big_G(vert, hor)) < 1e-9 * max(1.0, big_G(x, x))
        # horizontal part has vanishing connection
        assert np.linalg.norm(connection(psi, hor)) < 1e-9


def test_lie_metric_oracle_and_vertical_compatibility():
    # [DERIVED] G(psi xi, psi eta) = hbar Tr((xi† eta + eta† xi) P)
    rng = make_rng(46)
    for _ in range(50):
        psi = _random_setting(rng)
        xi = random_gauge_element(psi.sigma, rng)
        eta = random_gauge_element(psi.sigma, rng)
        hbar = float(rng.uniform(0.5, 2.0))
        lhs = big_G(psi.mat @ xi, psi.mat @ eta, hbar)
        assert np.isclose(lhs, lie_metric(xi, eta, psi.sigma, hbar), atol=1e-10)
        p = p_sigma(psi.sigma)
        oracle = hbar * np.trace((dagger(xi) @ eta + dagger(eta) @ xi) @ p).real
        assert np.isclose(lie_metric(xi, eta, psi.sigma, hbar), oracle)


def test_chi_hat_and_xi_perp():
    rng = make_rng(47)
    for _ in range(30):
        sigma = random_spectrum(rng, 5, max_multiplicity=2)
        hbar = float(rng.uniform(0.5, 2.0))
        chi = chi_hat(sigma, hbar)
        # unit vector in the Lie-algebra metric
        assert np.isclose(lie_metric(chi, chi, sigma, hbar), 1.0, atol=1e-12)
        xi = random_gauge_element(sigma, rng)
        perp = xi_perp(xi, sigma, hbar)
        assert abs(lie_metric(perp, chi, sigma, hbar)) < 1e-12


def test_xi_field_is_gauge_valued_projection():
    rng = make_rng(48)
    for _ in range(30):
        psi = _random_setting(rng)
        h = random_hermitian(rng, psi.dim)
        xi = xi_field(h, psi, hbar=1.0)
        require_gauge(xi, psi.sigma, "xi")
        # oracle: xi = A_psi(X_H) with X_H = -(i/hbar) H psi
        assert np.allclose(xi, connection(psi, -1j * (h @ psi.mat)), atol=1e-10)


def test_u_sigma_basis_spans_and_is_orthogonal_free():
    rng = make_rng(49)
    sigma = random_spectrum(rng, 6, max_multiplicity=3)
    basis = u_sigma_basis(sigma)
    # real dimension of u(sigma) is sum of m_j^2
    assert len(basis) == sum(m * m for m in sigma.multiplicities)
    flat = np.array([b.reshape(-1) for b in basis])
    assert np.linalg.matrix_rank(
        np.concatenate([flat.real, flat.imag], axis=1)) == len(basis)
    for b in basis:
        require_gauge(b, sigma, "basis element")


def test_block_diagonal_part_idempotent():
    rng = make_rng(50)
    sigma = random_spectrum(rng, 5, max_multiplicity=2)
    m = rng.normal(size=(sigma.k_tot, sigma.k_tot)) \
        + 1j * rng.normal(size=(sigma.k_tot, sigma.k_tot))
    d = block_diagonal_part(m, sigma)
    assert np.allclose(block_diagonal_part(d, sigma), d)
    # commutes with P(sigma)
    p = p_sigma(sigma)
    assert np.allclose(d @ p, p @ d, atol=1e-12)


def test_require_gauge_rejects_non_commuting():
    sigma = Spectrum((0.7, 0.3), (1, 1))
    bad = np.array([[0.0, 1.0], [-1.0, 0.0]])  # skew but off-diagonal
    with pytest.raises(ValueError):
        require_gauge(bad, sigma, "bad")
