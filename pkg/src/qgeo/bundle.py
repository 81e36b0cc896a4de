# src/qgeo/bundle.py

"""Principal-bundle geometry of the mixed-state orbit.

S(sigma) -> D(sigma) is a principal bundle with structure group U(sigma), the
unitaries on K commuting with P(sigma) (block unitaries over the multiplicity
blocks).  Its Lie algebra u(sigma) consists of block-diagonal anti-Hermitian
matrices.  On the total space G(X,Y) = hbar Tr(X†Y + Y†X) and
Omega(X,Y) = -i hbar Tr(X†Y - Y†X); on the algebra
xi.eta = hbar Tr((xi†eta + eta†xi) P(sigma)).  The mechanical connection is

    A_psi(X) = sum_j Pi_j psi†X Pi_j P(sigma)^{-1},

whose kernel is the G-orthogonal complement of the vertical space {psi xi}.
"""

from __future__ import annotations

import numpy as np
import numpy.linalg as npl

from .config import resolve_hbar
from .linops import as_complex, dagger, expm_skew, real_trace
from .states import Purification, Spectrum, p_sigma

TANGENT_TOL = 1e-9


def big_G(x, y, hbar: float | None = None) -> float:
    """hbar * Tr(x†y + y†x)."""
    x, y = as_complex(x), as_complex(y)
    if x.shape != y.shape:
        raise ValueError(f"shape mismatch: {x.shape} vs {y.shape}")
    return 2 * resolve_hbar(hbar) * float(np.tensordot(x.conj(), y, axes=2).real)


def big_Omega(x, y, hbar: float | None = None) -> float:
    """-i * hbar * Tr(x†y - y†x)."""
    x, y = as_complex(x), as_complex(y)
    if x.shape != y.shape:
        raise ValueError(f"shape mismatch: {x.shape} vs {y.shape}")
    return 2 * resolve_hbar(hbar) * float(np.tensordot(x.conj(), y, axes=2).imag)


def block_diagonal_part(m, sigma: Spectrum) -> np.ndarray:
    """Project a k_tot x k_tot matrix onto the Pi_j blocks."""
    m = as_complex(m)
    out = np.zeros_like(m)
    for s in sigma.block_slices():
        out[s, s] = m[s, s]
    return out


def require_gauge(xi, sigma: Spectrum, name: str = "xi") -> np.ndarray:
    """Validate membership in u(sigma): anti-Hermitian, commutes with P(sigma)."""
    xi = as_complex(xi)
    if xi.shape != (sigma.k_tot, sigma.k_tot):
        raise ValueError(f"{name} has shape {xi.shape}, expected k_tot x k_tot")
    if npl.norm(xi + dagger(xi)) > 1e-10:
        raise ValueError(f"{name} is not anti-Hermitian")
    if npl.norm(xi - block_diagonal_part(xi, sigma)) > 1e-10:
        raise ValueError(f"{name} does not commute with P(sigma)")
    return xi


def require_tangent(psi: Purification, x, name: str = "tangent") -> np.ndarray:
    """Validate tangency to S(sigma): X†psi + psi†X = 0."""
    x = as_complex(x)
    if x.shape != psi.mat.shape:
        raise ValueError(f"{name} has shape {x.shape}, expected {psi.mat.shape}")
    defect = dagger(x) @ psi.mat + dagger(psi.mat) @ x
    if npl.norm(defect) > TANGENT_TOL * max(1.0, npl.norm(x)):
        raise ValueError(f"{name} is not tangent to S(sigma)")
    return x


def lie_metric(xi, eta, sigma: Spectrum, hbar: float | None = None) -> float:
    """xi.eta = hbar Tr((xi†eta + eta†xi) P(sigma)); positive definite on u(sigma)."""
    xi, eta = as_complex(xi), as_complex(eta)
    p = p_sigma(sigma)
    return resolve_hbar(hbar) * real_trace(
        (dagger(xi) @ eta + dagger(eta) @ xi) @ p, "lie_metric"
    )


def connection(psi: Purification, x) -> np.ndarray:
    """Mechanical connection A_psi(X) = sum_j Pi_j psi†X Pi_j P(sigma)^{-1}.

    P^{-1} is applied as diagonal reciprocals blockwise, never by general
    inversion, keeping the formula exact to rounding.
    """
    x = require_tangent(psi, x)
    m = dagger(psi.mat) @ x
    out = np.zeros_like(m)
    for s, lam in zip(psi.sigma.block_slices(), psi.sigma.values):
        out[s, s] = m[s, s] / lam
    return out


def split(psi: Purification, x) -> tuple[np.ndarray, np.ndarray]:
    """(vertical, horizontal) decomposition of a tangent; sum reconstructs X."""
    xi = connection(psi, x)
    vertical = psi.mat @ xi
    return vertical, x - vertical


def xi_field(h, psi: Purification, hbar: float | None = None) -> np.ndarray:
    """xi_H at psi: the connection applied to the lift X_H = (1/(i*hbar)) H psi."""
    hbar = resolve_hbar(hbar)
    h = as_complex(h)
    lift = (h @ psi.mat) / (1j * hbar)
    return connection(psi, lift)


def chi_hat(sigma: Spectrum, hbar: float | None = None) -> np.ndarray:
    """The vertical unit direction: -i*identity normalized by lie_metric.

    Since Tr P(sigma) = 1, its norm is sqrt(2*hbar), so chi_hat = -i*1/sqrt(2*hbar).
    """
    chi = -1j * np.eye(sigma.k_tot)
    return chi / np.sqrt(lie_metric(chi, chi, sigma, hbar))


def xi_perp(xi, sigma: Spectrum, hbar: float | None = None) -> np.ndarray:
    """Projection of xi onto the lie_metric-orthogonal complement of chi_hat."""
    xi = require_gauge(xi, sigma)
    chi = chi_hat(sigma, hbar)
    return xi - lie_metric(xi, chi, sigma, hbar) * chi


def u_sigma_basis(sigma: Spectrum) -> list[np.ndarray]:
    """A real basis of u(sigma): blockwise anti-Hermitian elementary matrices."""
    k_tot = sigma.k_tot
    basis = []
    for s in sigma.block_slices():
        idx = range(s.start, s.stop)
        for i in idx:
            e = np.zeros((k_tot, k_tot), dtype=complex)
            e[i, i] = 1j
            basis.append(e)
        for i in idx:
            for j in idx:
                if i < j:
                    e = np.zeros((k_tot, k_tot), dtype=complex)
                    e[i, j], e[j, i] = 1.0, -1.0
                    basis.append(e)
                    f = np.zeros((k_tot, k_tot), dtype=complex)
                    f[i, j], f[j, i] = 1j, 1j
                    basis.append(f)
    return basis


def random_gauge_element(sigma: Spectrum, rng: np.random.Generator) -> np.ndarray:
    """Random element of u(sigma)."""
    k_tot = sigma.k_tot
    z = rng.normal(size=(k_tot, k_tot)) + 1j * rng.normal(size=(k_tot, k_tot))
    return block_diagonal_part((z - dagger(z)) / 2, sigma)


def random_gauge_unitary(sigma: Spectrum, rng: np.random.Generator) -> np.ndarray:
    """Random element of U(sigma) (exponential of a random algebra element)."""
    return expm_skew(random_gauge_element(sigma, rng))
