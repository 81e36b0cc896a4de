# src/qgeo/holonomy.py

"""Horizontal lifts, holonomy and geometric phase.

A curve in D(sigma) is represented by a sampled lift in S(sigma) on a uniform
time grid (StateCurve).  The horizontal lift multiplies the samples by the
time-ordered exponential

    psi_par(t) = psi(t) * V(t),    V' = -A_psi(psi')(t) V,   V(0) = I,

integrated with classical RK4 and midpoint connection evaluation; psi' along
the sampled curve comes from 4th-order finite differences.  The geometric
phase is gamma = arg Tr(psi_par(0)† psi_par(tau)) in (-pi, pi]; for closed
base curves it is the holonomy phase arg Tr(P(sigma) Hol).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np
import numpy.linalg as npl

from .config import resolve_hbar
from .linops import as_complex, dagger
from .states import Purification, Spectrum, as_density, p_sigma, purify, reduce

MAX_SAMPLE_JUMP = 0.5  # Frobenius continuity bound between consecutive samples
MAX_STEP_ROTATION = 0.1  # ||A|| * dt bound for the time-ordered integration


class StepSizeError(ValueError):
    """The sample grid is too coarse for the horizontal-lift integration."""


class UndefinedPhaseError(ValueError):
    """|Tr(psi_par(0)† psi_par(tau))| is numerically zero: the phase is undefined."""


@dataclass(frozen=True)
class StateCurve:
    """Sampled lift of a density-operator curve: psi(t_j) in S(sigma)."""

    times: np.ndarray
    samples: np.ndarray  # shape (N+1, n, k_tot)
    sigma: Spectrum

    def __post_init__(self):
        times = np.asarray(self.times, dtype=float)
        samples = as_complex(self.samples)
        if times.ndim != 1 or len(times) < 2 or samples.shape[0] != len(times):
            raise ValueError("need matching times/samples with at least 2 samples")
        dt = np.diff(times)
        if dt.min() <= 0:
            raise ValueError("times must be strictly increasing")
        if not np.allclose(dt, dt[0], rtol=1e-9, atol=1e-12 * max(1.0, dt[0])):
            raise ValueError("times must form a uniform grid")
        if samples.ndim != 2 + 1 or samples.shape[2] != self.sigma.k_tot:
            raise ValueError(f"samples shape {samples.shape} does not match sigma")
        p = p_sigma(self.sigma)
        gram = np.einsum("tij,tik->tjk", samples.conj(), samples)
        if npl.norm(gram - p, axis=(1, 2)).max() > 1e-9:
            raise ValueError("some sample violates psi†psi = P(sigma)")
        jumps = npl.norm(np.diff(samples, axis=0), axis=(1, 2))
        if jumps.max() > MAX_SAMPLE_JUMP:
            raise ValueError(
                f"consecutive samples jump by {jumps.max():.3g} > {MAX_SAMPLE_JUMP}: "
                "curve is not resolved by the grid"
            )
        object.__setattr__(self, "times", times)
        object.__setattr__(self, "samples", samples)

    @property
    def dt(self) -> float:
        return float(self.times[1] - self.times[0])

    @property
    def steps(self) -> int:
        return len(self.times) - 1

    def start(self) -> Purification:
        return Purification(self.samples[0], self.sigma)

    def base_point(self, j: int) -> np.ndarray:
        s = self.samples[j]
        return s @ dagger(s)

    def is_closed(self, tol: float = 1e-8) -> bool:
        return bool(npl.norm(self.base_point(0) - self.base_point(-1)) <= tol)

    def regauge(self, gauges: np.ndarray) -> "StateCurve":
        """Right-multiply sample j by gauges[j] (each in U(sigma))."""
        gauges = as_complex(gauges)
        return StateCurve(self.times, self.samples @ gauges, self.sigma)


@dataclass(frozen=True)
class UnitaryFamily:
    """t -> U(t) on a duration [0, tau] with a sampling resolution."""

    unitary: Callable[[float], np.ndarray]
    tau: float
    steps: int

    def __post_init__(self):
        if self.tau <= 0 or self.steps < 2:
            raise ValueError("need tau > 0 and steps >= 2")

    def times(self) -> np.ndarray:
        return np.linspace(0.0, self.tau, self.steps + 1)

    @staticmethod
    def diag_phase(rates, tau: float, steps: int) -> "UnitaryFamily":
        """U(t) = diag(exp(-i * rate_j * t)): exact closed form."""
        rates = np.asarray(rates, dtype=float)
        return UnitaryFamily(lambda t: np.diag(np.exp(-1j * rates * t)), tau, steps)

    @staticmethod
    def from_constant(h, tau: float, steps: int,
                      hbar: float | None = None) -> "UnitaryFamily":
        """U(t) = exp(-i H t / hbar) for constant Hermitian H (exact)."""
        from .linops import hermitian_eig

        hbar = resolve_hbar(hbar)
        w, V = hermitian_eig(h)

        def u(t: float) -> np.ndarray:
            return (V * np.exp(-1j * w * t / hbar)) @ dagger(V)

        return UnitaryFamily(u, tau, steps)

    @staticmethod
    def from_generator(h_of_t: Callable[[float], np.ndarray], tau: float,
                       steps: int, hbar: float | None = None,
                       substeps: int = 4) -> "UnitaryFamily":
        """Time-dependent generator: U built by midpoint-exponential products.

        The ordered product over substeps is 2nd order in the substep; raise
        ``substeps`` if the generator varies quickly.
        """
        from .linops import expm_skew

        hbar = resolve_hbar(hbar)
        grid = np.linspace(0.0, tau, steps * substeps + 1)
        us = [np.eye(np.asarray(h_of_t(0.0)).shape[0], dtype=complex)]
        for a, b in zip(grid[:-1], grid[1:]):
            h_mid = h_of_t(0.5 * (a + b))
            us.append(expm_skew(-1j * (b - a) / hbar * h_mid) @ us[-1])
        table = {round(float(t), 15): u for t, u in zip(grid, us)}

        def u(t: float) -> np.ndarray:
            key = round(float(t), 15)
            if key not in table:
                raise ValueError(f"t = {t} is not on the family grid")
            return table[key]

        return UnitaryFamily(u, tau, steps)


def lift_curve(family: UnitaryFamily, rho0,
               tol: float = 1e-10) -> StateCurve:
    """psi(t_j) = U(t_j) * purify(rho0): the naive lift of rho(t) = U rho0 U†."""
    rho0 = as_density(rho0)
    return lift_from(family, purify(rho0, tol))


def lift_from(family: UnitaryFamily, psi0: Purification) -> StateCurve:
    """Naive lift starting from a caller-chosen purification."""
    times = family.times()
    samples = np.stack([family.unitary(t) @ psi0.mat for t in times])
    return StateCurve(times, samples, psi0.sigma)


def _derivatives(samples: np.ndarray, dt: float) -> np.ndarray:
    """4th-order finite differences on a uniform grid (one-sided at the ends)."""
    n = samples.shape[0]
    if n < 5:
        raise StepSizeError("need at least 5 samples for 4th-order differences")
    d = np.empty_like(samples)
    d[2:-2] = (samples[:-4] - 8 * samples[1:-3]
               + 8 * samples[3:-1] - samples[4:]) / (12 * dt)
    c0 = np.array([-25, 48, -36, 16, -3]) / 12.0
    c1 = np.array([-3, -10, 18, -6, 1]) / 12.0
    d[0] = np.tensordot(c0, samples[:5], axes=1) / dt
    d[1] = np.tensordot(c1, samples[:5], axes=1) / dt
    d[-1] = -np.tensordot(c0, samples[-1:-6:-1], axes=1) / dt
    d[-2] = -np.tensordot(c1, samples[-1:-6:-1], axes=1) / dt
    return d


def _connection_stack(samples: np.ndarray, dsamples: np.ndarray,
                      sigma: Spectrum) -> np.ndarray:
    """A_psi(psi') at every sample, vectorized over the grid."""
    m = np.einsum("tij,tik->tjk", samples.conj(), dsamples)
    tang = npl.norm(m + np.swapaxes(m.conj(), 1, 2), axis=(1, 2))
    scale = np.maximum(1.0, npl.norm(dsamples, axis=(1, 2)))
    # Tangency here is limited by the finite-difference truncation error, so
    # the bound is looser than the pointwise construction tolerance.
    if (tang / scale).max() > 1e-5:
        raise ValueError("sampled derivative is not tangent to S(sigma)")
    out = np.zeros_like(m)
    for s, lam in zip(sigma.block_slices(), sigma.values):
        out[:, s, s] = m[:, s, s] / lam
    return out


def horizontal_lift(curve: StateCurve) -> StateCurve:
    """Multiply the lift by the time-ordered exponential of minus the connection."""
    dt = curve.dt
    conn = _connection_stack(curve.samples, _derivatives(curve.samples, dt),
                             curve.sigma)
    rotation = npl.norm(conn, axis=(1, 2)).max() * dt
    if rotation >= MAX_STEP_ROTATION:
        raise StepSizeError(
            f"per-step rotation ||A||*dt = {rotation:.3g} exceeds "
            f"{MAX_STEP_ROTATION}; refine the grid"
        )
    k_tot = curve.sigma.k_tot
    eye = np.eye(k_tot, dtype=complex)
    a0, a1 = conn[:-1], conn[1:]
    am = 0.5 * (a0 + a1)
    # V' = -A(t) V is linear, so each RK4 step is a transfer matrix.
    k1 = -a0
    k2 = -am @ (eye + 0.5 * dt * k1)
    k3 = -am @ (eye + 0.5 * dt * k2)
    k4 = -a1 @ (eye + dt * k3)
    transfer = eye + dt / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4)
    # Project each transfer matrix onto the unitary group (polar projection,
    # batched): the O(dt^5) local accuracy is unaffected, while V stays
    # exactly unitary so psi_par satisfies the S(sigma) membership invariant.
    u_, _, vh_ = npl.svd(transfer)
    transfer = u_ @ vh_
    vs = np.empty_like(conn)
    vs[0] = eye
    for j in range(curve.steps):
        vs[j + 1] = transfer[j] @ vs[j]
    return StateCurve(curve.times, curve.samples @ vs, curve.sigma)


def geometric_phase(curve: StateCurve) -> float:
    """gamma = arg Tr(psi_par(0)† psi_par(tau)) in (-pi, pi]."""
    lifted = horizontal_lift(curve)
    tr = np.trace(dagger(lifted.samples[0]) @ lifted.samples[-1])
    if abs(tr) < 1e-12:
        raise UndefinedPhaseError("trace magnitude below 1e-12: phase undefined")
    return float(np.angle(tr))


def aharonov_anandan_phase(curve: StateCurve) -> float:
    """Pure-state (k_tot = 1) specialization for closed base curves."""
    if curve.sigma.k_tot != 1:
        raise ValueError("Aharonov-Anandan phase needs a pure-state curve")
    if not curve.is_closed(1e-8):
        raise ValueError("base curve is not closed")
    return geometric_phase(curve)


def circular_distance(a: float, b: float) -> float:
    """Distance between two angles modulo 2*pi."""
    d = (a - b) % (2 * np.pi)
    return float(min(d, 2 * np.pi - d))


# ---------------------------------------------------------------------------
# The precessing-qubit example family.


def precessing_qubit_state(theta: float, p: float) -> np.ndarray:
    """rho = (I + p sin(theta) sigma_1 + p cos(theta) sigma_3)/2.

    Bloch vector of length p tilted by theta from the third axis; eigenvalues
    (1 +/- p)/2 with eigenvectors independent of p.
    """
    if not 0 <= p <= 1:
        raise ValueError("need 0 <= p <= 1")
    from .states import density_from_bloch

    return density_from_bloch([p * np.sin(theta), 0.0, p * np.cos(theta)])


def precessing_qubit_family(steps: int) -> UnitaryFamily:
    """U(t) = diag(e^{-it}, e^{it}) over one base-curve period tau = pi.

    The conjugated density operator rotates its off-diagonal phase as
    e^{-2it}, so the base curve closes at tau = pi.
    """
    return UnitaryFamily.diag_phase([1.0, -1.0], np.pi, steps)


def precessing_qubit_closed_form(theta: float, p: float) -> float:
    """Closed-form geometric phase of the precessing-qubit family.

    gamma = arg(-(1+p)/2 * e^{i pi cos(theta)} - (1-p)/2 * e^{-i pi cos(theta)}).
    Valid for p > 0; at p = 0 the orbit degenerates to the single point I/2
    (whose holonomy is trivial) and this expression is only the p -> 0 limit.
    """
    c = np.pi * np.cos(theta)
    z = -0.5 * (1 + p) * np.exp(1j * c) - 0.5 * (1 - p) * np.exp(-1j * c)
    return float(np.angle(z))


def precessing_qubit_lift(theta: float, p: float, steps: int) -> StateCurve:
    """Sampled lift of the example family, valid for all p in [0, 1].

    For p > 0 this agrees with lift_curve of the density operator; the direct
    construction keeps the eigenframe (which is theta-only) explicit.
    """
    half = theta / 2.0
    frame = np.array([[np.cos(half), -np.sin(half)],
                      [np.sin(half), np.cos(half)]], dtype=complex)
    lam = np.array([(1 + p) / 2.0, (1 - p) / 2.0])
    if p < 1:
        if p > 0:
            sigma = Spectrum((lam[0], lam[1]), (1, 1))
        else:
            sigma = Spectrum((0.5,), (2,))
        psi0 = Purification(frame * np.sqrt(lam), sigma)
    else:
        sigma = Spectrum((1.0,), (1,))
        psi0 = Purification(frame[:, :1], sigma)
    return lift_from(precessing_qubit_family(steps), psi0)
