# src/qgeo/kahler.py

"""Kahler data on the Hilbert space and on projective space.

On H: G(a,b) = 2*hbar*Re<a|b> and Omega(a,b) = 2*hbar*Im<a|b>.  On the
projective space the Fubini-Study Hermitian metric at a unit ray psi is

    h(phi1, phi2) = 2*hbar*(<phi1|phi2> - <phi1|psi><psi|phi2>),

whose real and imaginary parts are the Riemannian metric g and symplectic
form omega.  Tangent representatives are arbitrary vectors; the formula (and
project_perp) quotients out the vertical C*psi direction internally.
"""

from __future__ import annotations

import numpy as np

from .config import resolve_hbar
from .linops import as_complex
from .states import as_pure


def _pair(a, b) -> complex:
    a, b = as_complex(a).reshape(-1), as_complex(b).reshape(-1)
    if a.shape != b.shape:
        raise ValueError(f"dimension mismatch: {a.shape} vs {b.shape}")
    return np.vdot(a, b)


def metric_G(a, b, hbar: float | None = None) -> float:
    """2*hbar*Re<a|b>."""
    return 2 * resolve_hbar(hbar) * _pair(a, b).real


def symplectic_Omega(a, b, hbar: float | None = None) -> float:
    """2*hbar*Im<a|b>."""
    return 2 * resolve_hbar(hbar) * _pair(a, b).imag


def project_perp(psi, x) -> np.ndarray:
    """X - <psi|X> psi: the representative tangent orthogonal to the ray."""
    psi = as_pure(psi)
    x = as_complex(x).reshape(-1)
    if x.shape != psi.shape:
        raise ValueError(f"dimension mismatch: {x.shape} vs {psi.shape}")
    return x - np.vdot(psi, x) * psi


def fs_hermitian(psi, phi1, phi2, hbar: float | None = None) -> complex:
    """The Fubini-Study Hermitian metric at unit psi on representatives phi1, phi2."""
    psi = as_pure(psi)
    p1, p2 = _pair(psi, phi1), _pair(psi, phi2)
    return 2 * resolve_hbar(hbar) * (_pair(phi1, phi2) - np.conj(p1) * p2)


def fs_metric(psi, phi1, phi2, hbar: float | None = None) -> float:
    """Fubini-Study Riemannian metric g (real part of the Hermitian metric)."""
    return fs_hermitian(psi, phi1, phi2, hbar).real


def fs_symplectic(psi, phi1, phi2, hbar: float | None = None) -> float:
    """Fubini-Study symplectic form omega (imaginary part of the Hermitian metric)."""
    return fs_hermitian(psi, phi1, phi2, hbar).imag
