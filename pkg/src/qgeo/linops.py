# src/qgeo/linops.py

"""Dense complex linear algebra on small matrices.

Validation helpers (require_*) and the handful of primitives the rest of the
library is built on: adjoints, (anti)commutators, Hermitian eigendecomposition
with a deterministic descending order, and unitary exponentials of
skew-Hermitian matrices computed by eigendecomposition so the output is
unitary to eigensolver precision.
"""

from __future__ import annotations

import numpy as np
import numpy.linalg as npl

# Relative tolerance for Hermiticity/skewness checks, with an absolute floor
# so near-zero matrices pass.
_SYM_RTOL = 1e-12
_SYM_FLOOR = 1e-14

SIGMA_1 = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_2 = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_3 = np.array([[1, 0], [0, -1]], dtype=complex)
PAULI = (SIGMA_1, SIGMA_2, SIGMA_3)


def as_complex(m) -> np.ndarray:
    """Coerce input to a complex ndarray and reject non-finite entries."""
    m = np.asarray(m, dtype=complex)
    if not np.all(np.isfinite(m)):
        raise ValueError("matrix has non-finite entries")
    return m


def dagger(m: np.ndarray) -> np.ndarray:
    """Conjugate transpose."""
    return np.asarray(m).conj().T


def _sym_tol(m: np.ndarray) -> float:
    return max(_SYM_FLOOR, _SYM_RTOL * max(1.0, float(npl.norm(m))))


def require_hermitian(m, name: str = "matrix") -> np.ndarray:
    m = as_complex(m)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"{name} must be square, got shape {m.shape}")
    if npl.norm(m - dagger(m)) > _sym_tol(m):
        raise ValueError(f"{name} is not Hermitian")
    return m


def require_skew(m, name: str = "matrix") -> np.ndarray:
    m = as_complex(m)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"{name} must be square, got shape {m.shape}")
    if npl.norm(m + dagger(m)) > _sym_tol(m):
        raise ValueError(f"{name} is not skew-Hermitian")
    return m


def require_unitary(m, name: str = "matrix", tol: float = 1e-10) -> np.ndarray:
    m = as_complex(m)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"{name} must be square, got shape {m.shape}")
    if npl.norm(dagger(m) @ m - np.eye(m.shape[0])) > tol:
        raise ValueError(f"{name} is not unitary")
    return m


def _require_same_square(a, b) -> tuple[np.ndarray, np.ndarray]:
    a, b = as_complex(a), as_complex(b)
    if a.shape != b.shape or a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"expected equal square shapes, got {a.shape} and {b.shape}")
    return a, b


def commutator(a, b) -> np.ndarray:
    """ab - ba."""
    a, b = _require_same_square(a, b)
    return a @ b - b @ a


def anticommutator(a, b) -> np.ndarray:
    """ab + ba."""
    a, b = _require_same_square(a, b)
    return a @ b + b @ a


def hermitian_eig(h) -> tuple[np.ndarray, np.ndarray]:
    """Eigendecomposition of a Hermitian matrix, eigenvalues descending.

    Returns (w, V) with w sorted in descending order and V's columns the
    matching orthonormal eigenvectors.  The sort is stable, so degenerate
    eigenvalues keep the eigensolver's original relative order, making
    repeated calls on identical input deterministic.
    """
    h = require_hermitian(h)
    w, V = npl.eigh(h)
    order = np.argsort(-w, kind="stable")
    return w[order], V[:, order]


def expm_skew(s) -> np.ndarray:
    """exp(s) for skew-Hermitian s, via eigendecomposition of i*s.

    The result is unitary to eigensolver precision, which matters more here
    than generality: every exponential in this library is of this type.
    """
    s = require_skew(s)
    w, V = npl.eigh(1j * s)
    return (V * np.exp(-1j * w)) @ dagger(V)


def frobenius_real(a, b) -> float:
    """Tr(a†b + b†a) as a real number."""
    a, b = as_complex(a), as_complex(b)
    if a.shape != b.shape:
        raise ValueError(f"shape mismatch: {a.shape} vs {b.shape}")
    value = np.trace(dagger(a) @ b + dagger(b) @ a)
    scale = max(1.0, abs(value))
    assert abs(value.imag) <= 1e-12 * scale, "non-real Frobenius pairing"
    return float(value.real)


def real_trace(m, name: str = "trace") -> float:
    """Trace asserted real up to rounding; imaginary residue discarded."""
    value = np.trace(np.asarray(m))
    assert abs(value.imag) <= 1e-12 * max(1.0, abs(value)), f"{name} is not real"
    return float(value.real)
