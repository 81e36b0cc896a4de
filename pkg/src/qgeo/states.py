# src/qgeo/states.py

"""State representations.

Pure states are unit complex vectors, density operators are Hermitian positive
trace-one matrices (both carried as plain ndarrays, validated by as_pure /
as_density).  The spectrum sigma of a density operator records the distinct
eigenvalues of the support in descending order with multiplicities; it labels
the unitary orbit of the operator.  A purification is an n x k_tot matrix psi
with psi psi† = rho and psi†psi = P(sigma), the diagonal reference operator.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import numpy.linalg as npl

from .config import resolve_hbar
from .linops import PAULI, as_complex, dagger, hermitian_eig, require_hermitian

DEFAULT_SPECTRAL_TOL = 1e-10


def as_pure(psi, name: str = "state") -> np.ndarray:
    """Validate a unit vector."""
    psi = as_complex(psi).reshape(-1)
    if abs(npl.norm(psi) - 1.0) > 1e-12:
        raise ValueError(f"{name} is not normalized")
    return psi


def as_density(rho, name: str = "rho") -> np.ndarray:
    """Validate a density operator: Hermitian, positive, unit trace."""
    rho = require_hermitian(rho, name)
    w = npl.eigvalsh(rho)
    if w.min() < -1e-12:
        raise ValueError(f"{name} has negative eigenvalue {w.min():.3e}")
    if abs(w.sum() - 1.0) > 1e-12:
        raise ValueError(f"{name} has trace {w.sum()!r}, expected 1")
    return rho


@dataclass(frozen=True)
class Spectrum:
    """sigma = (lambda_1..lambda_k; m_1..m_k), distinct descending, support only."""

    values: tuple[float, ...]
    multiplicities: tuple[int, ...]

    def __post_init__(self):
        values = tuple(float(v) for v in self.values)
        mults = tuple(int(m) for m in self.multiplicities)
        if len(values) != len(mults) or not values:
            raise ValueError("values and multiplicities must be equal-length, nonempty")
        if any(m < 1 for m in mults):
            raise ValueError("multiplicities must be positive")
        if values[-1] <= 0:
            raise ValueError("only the support is represented: eigenvalues must be > 0")
        if any(a <= b for a, b in zip(values, values[1:])):
            raise ValueError("values must be strictly decreasing")
        total = sum(v * m for v, m in zip(values, mults))
        if abs(total - 1.0) > 1e-10:
            raise ValueError(f"weights sum to {total!r}, expected 1")
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "multiplicities", mults)

    @property
    def k(self) -> int:
        return len(self.values)

    @property
    def k_tot(self) -> int:
        return sum(self.multiplicities)

    def block_slices(self) -> list[slice]:
        """Index ranges of the multiplicity blocks in P(sigma) order."""
        out, start = [], 0
        for m in self.multiplicities:
            out.append(slice(start, start + m))
            start += m
        return out

    def weights(self) -> np.ndarray:
        """Diagonal of P(sigma) as a length-k_tot vector."""
        return np.repeat(np.asarray(self.values), np.asarray(self.multiplicities))


@dataclass(frozen=True)
class Purification:
    """Element of S(sigma): n x k_tot matrix with psi†psi = P(sigma)."""

    mat: np.ndarray
    sigma: Spectrum

    def __post_init__(self):
        mat = as_complex(self.mat)
        if mat.ndim != 2 or mat.shape[1] != self.sigma.k_tot:
            raise ValueError(f"purification shape {mat.shape} does not match sigma")
        if npl.norm(dagger(mat) @ mat - p_sigma(self.sigma)) > 1e-10:
            raise ValueError("psi†psi != P(sigma): not a purification in S(sigma)")
        object.__setattr__(self, "mat", mat)

    @property
    def dim(self) -> int:
        return self.mat.shape[0]


def projector(psi) -> np.ndarray:
    """|psi><psi| as a density operator."""
    psi = as_pure(psi)
    return np.outer(psi, psi.conj())


def bloch_coords(psi) -> np.ndarray:
    """(x1, x2, x3) with x_i = <psi|sigma_i|psi>, for qubit pure states."""
    psi = as_pure(psi)
    if psi.shape != (2,):
        raise ValueError("bloch_coords requires a qubit state")
    return np.array([(psi.conj() @ (s @ psi)).real for s in PAULI])


def density_from_bloch(x) -> np.ndarray:
    """rho = (I + sum x_i sigma_i)/2 for a Bloch vector with |x| <= 1."""
    x = np.asarray(x, dtype=float).reshape(3)
    n2 = float(x @ x)
    if n2 > 1 + 1e-12:
        raise ValueError(f"Bloch vector has norm {np.sqrt(n2)} > 1")
    rho = np.eye(2, dtype=complex)
    for xi, s in zip(x, PAULI):
        rho = rho + xi * s
    return rho / 2


def spectrum_of(rho, tol: float = DEFAULT_SPECTRAL_TOL) -> Spectrum:
    """Cluster the eigenvalues of rho into a Spectrum.

    Eigenvalues within absolute gap ``tol`` are merged (cluster value = mean);
    eigenvalues below ``tol`` are dropped, so only the support is represented.
    An inter-cluster gap below 2*tol is ambiguous (merging was a borderline
    call) and raises.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    rho = as_density(rho)
    w = np.sort(npl.eigvalsh(rho))[::-1]
    clusters: list[list[float]] = [[float(w[0])]]
    for v in w[1:]:
        if clusters[-1][-1] - v <= tol:
            clusters[-1].append(float(v))
        else:
            clusters.append([float(v)])
    values = [float(np.mean(c)) for c in clusters]
    mults = [len(c) for c in clusters]
    for (hi, lo) in zip(values, values[1:]):
        if hi - lo < 2 * tol:
            raise ValueError(
                f"ambiguous spectral clustering: values {hi!r} and {lo!r} "
                f"are separated by less than 2*tol = {2 * tol!r}"
            )
    # Drop the null space (P(sigma) must be invertible downstream).
    keep = [(v, m) for v, m in zip(values, mults) if v >= tol]
    if not keep:
        raise ValueError("spectrum has empty support")
    values = [v for v, _ in keep]
    mults = [m for _, m in keep]
    total = sum(v * m for v, m in zip(values, mults))
    if abs(total - 1.0) > 1e-10:
        raise ValueError(f"support weights sum to {total!r}, too far from 1")
    values = [v / total for v in values]
    return Spectrum(tuple(values), tuple(mults))


def p_sigma(sigma: Spectrum) -> np.ndarray:
    """P(sigma) = sum_j lambda_j Pi_j: diagonal, descending blocks, invertible."""
    return np.diag(sigma.weights()).astype(complex)


def purify(rho, tol: float = DEFAULT_SPECTRAL_TOL) -> Purification:
    """Canonical purification psi = sum_i sqrt(lambda_i) |e_i><i|.

    Columns follow the eigenbasis in descending eigenvalue order with stable
    ties, so the construction is deterministic; any other choice differs by
    the right U(sigma)-action.
    """
    rho = as_density(rho)
    sigma = spectrum_of(rho, tol)
    w, V = hermitian_eig(rho)
    k_tot = sigma.k_tot
    mat = V[:, :k_tot] * np.sqrt(sigma.weights())
    return Purification(mat, sigma)


def reduce(psi: Purification) -> np.ndarray:
    """psi psi†: the density operator under the bundle projection."""
    return psi.mat @ dagger(psi.mat)


# ---------------------------------------------------------------------------
# JSON import/export.  Complex scalars are [re, im] pairs.


def _c2pair(z: complex) -> list[float]:
    return [float(z.real), float(z.imag)]


def _pair2c(p) -> complex:
    return complex(p[0], p[1])


def pure_to_json(psi, hbar: float | None = None) -> dict:
    psi = as_pure(psi)
    return {"vector": [_c2pair(z) for z in psi], "hbar": resolve_hbar(hbar)}


def pure_from_json(doc: dict) -> tuple[np.ndarray, float]:
    psi = np.array([_pair2c(p) for p in doc["vector"]], dtype=complex)
    return as_pure(psi), float(doc.get("hbar", resolve_hbar(None)))


def density_to_json(rho, hbar: float | None = None) -> dict:
    rho = as_density(rho)
    return {
        "matrix": [[_c2pair(z) for z in row] for row in rho],
        "hbar": resolve_hbar(hbar),
    }


def density_from_json(doc: dict) -> tuple[np.ndarray, float]:
    rho = np.array(
        [[_pair2c(p) for p in row] for row in doc["matrix"]], dtype=complex
    )
    return as_density(rho), float(doc.get("hbar", resolve_hbar(None)))


def spectrum_to_json(sigma: Spectrum) -> dict:
    return {
        "values": list(sigma.values),
        "multiplicities": list(sigma.multiplicities),
    }


def spectrum_from_json(doc: dict) -> Spectrum:
    return Spectrum(tuple(doc["values"]), tuple(doc["multiplicities"]))
