# src/qgeo/measures.py

"""Distances, probabilities and measurement.

Pure-state distances are closed forms in the overlap |<psi1|psi2>|: the
geodesic length kappa = arccos|overlap|, the Fubini-Study, trace and
Hilbert-Schmidt distances.  Mixed-state distances on an orbit D(sigma): the
length functional of a density-operator curve (through the submersion metric
g = G(hor, hor)/(2*hbar)), a derivative-free upper-bound estimator of the
dynamic distance inf (1/hbar) int DeltaH dt, and the Bures distance from the
fidelity.  Spectral measurement implements the Born rule with a seeded RNG.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import numpy.linalg as npl
from scipy.integrate import simpson
from scipy.optimize import minimize

from .bundle import big_G, split
from .config import resolve_hbar
from .linops import dagger, hermitian_eig, require_hermitian
from .states import as_density, as_pure, purify

DistanceMethod = ("fubini_study", "trace", "hilbert_schmidt",
                  "geodesic_kappa", "dynamic", "bures_qubit")


@dataclass(frozen=True)
class DistanceReport:
    value: float
    method: str
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.method not in DistanceMethod:
            raise ValueError(f"unknown method {self.method!r}")
        if self.value < -1e-12:
            raise ValueError("distance must be non-negative")


def _overlap(p1, p2) -> float:
    p1, p2 = as_pure(p1), as_pure(p2)
    if p1.shape != p2.shape:
        raise ValueError("dimension mismatch")
    return min(1.0, abs(np.vdot(p1, p2)))


def kappa(p1, p2, scaled: bool = False, hbar: float | None = None) -> float:
    """Geodesic distance arccos|<psi1|psi2>| in [0, pi/2].

    With scaled=True returns sqrt(2*hbar)*kappa, the variant for which the
    probability law reads cos^2(kappa/sqrt(2*hbar)).
    """
    value = float(np.arccos(_overlap(p1, p2)))
    if scaled:
        value *= np.sqrt(2 * resolve_hbar(hbar))
    return value


def fs_distance(p1, p2) -> float:
    """D_FS = sqrt(2(1 - |overlap|))."""
    return float(np.sqrt(max(0.0, 2 * (1 - _overlap(p1, p2)))))


def trace_distance(p1, p2) -> float:
    """D = 2 sqrt(1 - |overlap|^2), cross-checked against Tr|P1 - P2|."""
    from .states import projector

    c = _overlap(p1, p2)
    value = 2 * np.sqrt(max(0.0, 1 - c * c))
    operator = float(np.abs(npl.eigvalsh(projector(p1) - projector(p2))).sum())
    # near coincident states sqrt(1 - c^2) amplifies overlap roundoff to 1e-8
    assert abs(value - operator) <= 1e-7, "trace-distance cross-check failed"
    return float(value)


def hs_distance(p1, p2) -> float:
    """D_HS = sqrt(2(1 - |overlap|^2))."""
    c = _overlap(p1, p2)
    return float(np.sqrt(max(0.0, 2 * (1 - c * c))))


def probability(p0, p) -> float:
    """Quantum probability distribution |<psi0|psi>|^2 = Tr(P0 P) = cos^2 kappa."""
    c = _overlap(p0, p)
    return float(c * c)


def mixed_probability(rho0, rho, diagnostics: bool = False,
                      search: "SearchConfig | None" = None,
                      hbar: float | None = None):
    """Tr(rho0 rho); the well-defined part of the mixed-state probability law.

    The conjectured identification with cos^2(kappa/sqrt(2*hbar)) is not
    asserted anywhere; with diagnostics=True the pair (trace value, cos^2
    value using the dynamic distance as kappa) is returned for empirical
    comparison only.
    """
    rho0, rho = as_density(rho0), as_density(rho)
    if rho0.shape != rho.shape:
        raise ValueError("dimension mismatch")
    value = float(np.trace(rho0 @ rho).real)
    if not diagnostics:
        return value
    hbar = resolve_hbar(hbar)
    dist = dynamic_distance(rho0, rho, search, hbar=hbar).value
    cos_sq = float(np.cos(dist / np.sqrt(2 * hbar)) ** 2)
    return value, cos_sq


# ---------------------------------------------------------------------------
# Spectral measurement.


@dataclass(frozen=True)
class MeasurementOutcome:
    eigenvalue: float
    post_state: np.ndarray
    outcomes: tuple[float, ...]
    probabilities: tuple[float, ...]


def measure(f, state, rng_seed: int, tol: float = 1e-10) -> MeasurementOutcome:
    """Projective measurement of F = sum_k f_k P_k on a pure or mixed state."""
    f = require_hermitian(f, "observable")
    w, V = hermitian_eig(f)
    # cluster eigenvalues with absolute tolerance, as in spectrum_of
    groups: list[list[int]] = [[0]]
    for i in range(1, len(w)):
        if w[groups[-1][-1]] - w[i] <= tol:
            groups[-1].append(i)
        else:
            groups.append([i])
    projectors = []
    outcomes = []
    for g in groups:
        cols = V[:, g]
        projectors.append(cols @ dagger(cols))
        outcomes.append(float(np.mean(w[g])))
    state = np.asarray(state)
    pure = state.ndim == 1
    rho = None if pure else as_density(state)
    psi = as_pure(state) if pure else None
    probs = []
    for pk in projectors:
        if pure:
            probs.append(float(np.vdot(psi, pk @ psi).real))
        else:
            probs.append(float(np.trace(pk @ rho).real))
    probs = np.clip(np.asarray(probs), 0.0, None)
    assert abs(probs.sum() - 1.0) <= 1e-10, "probabilities do not sum to 1"
    probs = probs / probs.sum()
    rng = np.random.default_rng(rng_seed)
    choices = [i for i, p in enumerate(probs) if p >= 1e-14]
    weights = probs[choices] / probs[choices].sum()
    k = int(rng.choice(choices, p=weights))
    if pure:
        post = projectors[k] @ psi
        post = post / npl.norm(post)
    else:
        post = projectors[k] @ rho @ projectors[k] / probs[k]
    return MeasurementOutcome(outcomes[k], post, tuple(outcomes),
                              tuple(float(p) for p in probs))


# ---------------------------------------------------------------------------
# Curve length on D(sigma).


def curve_length(times, rhos, h, hbar: float | None = None,
                 spectral_tol: float = 1e-10) -> float:
    """Length of a sampled density-operator curve generated by h.

    Length = int sqrt(g(X_H, X_H)) dt with the submersion metric
    g(X_H, X_H) = G(hor X_H, hor X_H)/(2*hbar) evaluated at a purification of
    each sample; composite Simpson quadrature on the grid.  ``h`` may be a
    constant Hermitian matrix or a callable t -> H(t); consistency of the
    pair (curve, h) is asserted via finite differences of the samples.
    """
    hbar = resolve_hbar(hbar)
    times = np.asarray(times, dtype=float)
    rhos = np.asarray(rhos, dtype=complex)
    if rhos.shape[0] != len(times) or len(times) < 3:
        raise ValueError("need matching times/samples, at least 3 samples")
    h_of = h if callable(h) else (lambda t, m=require_hermitian(h): m)

    # consistency: rhodot ~ [H, rho]/(i*hbar), by central differences
    dt = np.diff(times)
    scale = max(1.0, float(npl.norm(rhos[0])),
                float(npl.norm(h_of(times[0]))) / hbar)
    for j in range(1, len(times) - 1):
        fd = (rhos[j + 1] - rhos[j - 1]) / (times[j + 1] - times[j - 1])
        hj = require_hermitian(h_of(times[j]))
        gen = (hj @ rhos[j] - rhos[j] @ hj) / (1j * hbar)
        if npl.norm(fd - gen) > 1e-6 * scale + 10 * dt.max() ** 2 * scale:
            raise ValueError(
                f"curve is not generated by h: residual at t={times[j]:.4g}"
            )

    integrand = np.empty(len(times))
    for j, t in enumerate(times):
        psi = purify(rhos[j], spectral_tol)
        lift = (require_hermitian(h_of(t)) @ psi.mat) / (1j * hbar)
        _, hor = split(psi, lift)
        integrand[j] = np.sqrt(max(0.0, big_G(hor, hor, hbar) / (2 * hbar)))
    return float(simpson(integrand, x=times))


# ---------------------------------------------------------------------------
# Dynamic distance (upper-bound estimator).


@dataclass(frozen=True)
class SearchConfig:
    """Piecewise-constant Hamiltonian search: P segments, R restarts."""

    segments: int = 8
    restarts: int = 16
    max_iter: int = 150
    seed: int = 0
    tau: float = 1.0

    def __post_init__(self):
        if self.segments < 1 or self.restarts < 1 or self.max_iter < 1:
            raise ValueError("segments, restarts, max_iter must be >= 1")


def _traceless_hermitian_basis(n: int) -> list[np.ndarray]:
    """Generalized Gell-Mann basis of traceless Hermitian n x n matrices."""
    basis = []
    for i in range(n):
        for j in range(i + 1, n):
            e = np.zeros((n, n), dtype=complex)
            e[i, j] = e[j, i] = 1.0
            basis.append(e)
            f = np.zeros((n, n), dtype=complex)
            f[i, j], f[j, i] = -1j, 1j
            basis.append(f)
    for d in range(1, n):
        g = np.zeros((n, n), dtype=complex)
        g[:d, :d] = np.eye(d)
        g[d, d] = -d
        basis.append(g / np.sqrt(d * (d + 1) / 2.0))
    return basis


def _unitary_of_hermitian(h: np.ndarray, t: float, hbar: float) -> np.ndarray:
    w, V = npl.eigh(h)
    return (V * np.exp(-1j * w * t / hbar)) @ dagger(V)


def dynamic_distance(rho0, rho1, search: SearchConfig | None = None,
                     hbar: float | None = None) -> DistanceReport:
    """Upper bound on the dynamic distance inf (1/hbar) int DeltaH dt.

    Minimizes the action over piecewise-constant Hamiltonians (``segments``
    pieces, each an arbitrary traceless Hermitian) with a quadratic endpoint
    penalty, by Nelder-Mead with penalty continuation and random restarts.
    The first restart is seeded with the constant Hamiltonian
    i*hbar*log(V1 V0†)/tau that aligns the eigenbases, so the estimate starts
    from a feasible steering.  The result is an upper bound by construction.
    """
    hbar = resolve_hbar(hbar)
    search = search or SearchConfig()
    rho0, rho1 = as_density(rho0), as_density(rho1)
    if rho0.shape != rho1.shape:
        raise ValueError("dimension mismatch")
    w0, V0 = hermitian_eig(rho0)
    w1, V1 = hermitian_eig(rho1)
    if np.abs(w0 - w1).max() > 1e-8:
        raise ValueError("different orbits — distance undefined in D(sigma)")
    if npl.norm(rho0 - rho1) <= 1e-12:
        return DistanceReport(0.0, "dynamic",
                              {"restarts": 0, "iterations": 0,
                               "residual": 0.0, "upper_bound": True,
                               "segments": search.segments})

    n = rho0.shape[0]
    basis = _traceless_hermitian_basis(n)
    nb = len(basis)
    p_seg = search.segments
    dt = search.tau / p_seg

    def segment_h(coeffs: np.ndarray) -> np.ndarray:
        h = np.zeros((n, n), dtype=complex)
        for c, b in zip(coeffs, basis):
            h = h + c * b
        return h

    def evaluate(x: np.ndarray) -> tuple[float, float]:
        rho = rho0
        cost = 0.0
        for j in range(p_seg):
            h = segment_h(x[j * nb:(j + 1) * nb])
            # <H> and <H^2> are invariant under the flow H generates, so
            # DeltaH is constant within the segment.
            e1 = np.trace(h @ rho).real
            e2 = np.trace(h @ h @ rho).real
            cost += np.sqrt(max(0.0, e2 - e1 * e1)) * dt / hbar
            u = _unitary_of_hermitian(h, dt, hbar)
            rho = u @ rho @ dagger(u)
        return cost, float(npl.norm(rho - rho1))

    # Eigenbasis-aligning initializer.  Eigenvector phases are arbitrary, so
    # pick the diagonal gauge D that brings W = V1 D V0† closest to the
    # identity (maximize Re Tr W); otherwise a flipped sign sends the search
    # to a pi-rotation branch.
    from scipy.linalg import logm

    m_gauge = np.diag(dagger(V0) @ V1).copy()
    m_gauge[np.abs(m_gauge) < 1e-12] = 1.0
    d_gauge = np.conj(m_gauge) / np.abs(m_gauge)
    w_align = (V1 * d_gauge) @ dagger(V0)
    h_init = 1j * hbar * logm(w_align) / search.tau
    h_init = (h_init + dagger(h_init)) / 2
    h_init = h_init - np.trace(h_init) / n * np.eye(n)
    x0 = np.tile([frobenius_coeff(h_init, b) for b in basis], p_seg)

    rng = np.random.default_rng(search.seed)
    best = None
    nfev = 0
    for r in range(search.restarts):
        if r == 0:
            x = x0.copy()
        else:
            scale = 0.1 + 0.5 * npl.norm(x0) / max(1, len(x0)) ** 0.5
            x = x0 + rng.normal(scale=scale * r / search.restarts, size=x0.shape)
        for mu in (1e2, 1e4, 1e6):
            res = minimize(
                lambda v: (lambda c, d: c + mu * d * d)(*evaluate(v)),
                x, method="Nelder-Mead",
                options={"maxiter": search.max_iter, "xatol": 1e-10,
                         "fatol": 1e-12},
            )
            x = res.x
            nfev += res.nfev
        cost, residual = evaluate(x)
        if residual <= 1e-6 and (best is None or cost < best[0]):
            best = (cost, residual)
    if best is None:
        cost, residual = evaluate(x0)
        best = (cost, residual)
    return DistanceReport(best[0], "dynamic",
                          {"restarts": search.restarts, "iterations": nfev,
                           "residual": best[1], "upper_bound": True,
                           "segments": p_seg})


def frobenius_coeff(h: np.ndarray, b: np.ndarray) -> float:
    """Coefficient of h along basis element b in the Frobenius sense."""
    return float((np.trace(dagger(b) @ h) / np.trace(dagger(b) @ b)).real)


# ---------------------------------------------------------------------------
# Bures distance.


def fidelity(rho0, rho1) -> float:
    """Uhlmann fidelity (Tr sqrt(sqrt(rho0) rho1 sqrt(rho0)))^2."""
    rho0, rho1 = as_density(rho0), as_density(rho1)
    if rho0.shape != rho1.shape:
        raise ValueError("dimension mismatch")
    w, V = hermitian_eig(rho0)
    s = (V * np.sqrt(np.clip(w, 0.0, None))) @ dagger(V)
    inner = s @ rho1 @ s
    inner = (inner + dagger(inner)) / 2
    ev = np.clip(npl.eigvalsh(inner), 0.0, None)
    return float(np.sqrt(ev).sum() ** 2)


def bures(rho0, rho1) -> float:
    """Bures distance sqrt(2(1 - sqrt(F))), any dimension."""
    f = min(1.0, fidelity(rho0, rho1))
    return float(np.sqrt(max(0.0, 2 * (1 - np.sqrt(f)))))


def bures_qubit(rho0, rho1) -> float:
    """Bures distance for qubits, from the fidelity (the independent oracle)."""
    rho0, rho1 = as_density(rho0), as_density(rho1)
    if rho0.shape != (2, 2):
        raise ValueError("bures_qubit requires 2x2 density operators")
    return bures(rho0, rho1)


def bures_family_closed_form(lam1: float, lam2: float, eps: float) -> float:
    """The reported closed form for the rotating-eigenbasis qubit family.

    D = (lam1-lam2)/sqrt(2) * |sin eps| * sqrt(2 + (lam1-lam2)^2/(2 lam1 lam2)
    * sin^2 eps).  Kept as a cross-check target only: it deviates from the
    exact fidelity-based Bures distance at O(sin^4 eps) (the exact value is
    sqrt(2 - 2 sqrt(1 - (lam1-lam2)^2 sin^2 eps))).  At lam1 = lam2 the
    coefficient vanishes, so the lam1*lam2 denominator is harmless.
    """
    g = lam1 - lam2
    s = np.sin(eps)
    if g == 0.0:
        return 0.0
    return float(abs(g) / np.sqrt(2) * abs(s)
                 * np.sqrt(2 + g * g / (2 * lam1 * lam2) * s * s))


def rotation_family(lam1: float, lam2: float, angle: float) -> np.ndarray:
    """rho(angle) = R(angle) diag(lam1, lam2) R(angle)^T: the example family."""
    c, s = np.cos(angle), np.sin(angle)
    r = np.array([[c, -s], [s, c]])
    return (r @ np.diag([lam1, lam2]) @ r.T).astype(complex)
