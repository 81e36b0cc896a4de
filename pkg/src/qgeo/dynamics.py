# src/qgeo/dynamics.py

"""Hamiltonian dynamics as flows.

Schroedinger evolution of pure states and von Neumann evolution of density
operators for time-independent Hamiltonians, evaluated in the eigenbasis of H
(phases applied per time sample, not accumulated) so conservation tests see
neither integrator error nor roundoff growth with the step count.  Also the expectation functionals, Hamiltonian
vector fields and the Poisson bracket / commutator correspondence.

Normalization: with the 2*hbar conventions of the kahler module and the
expectation functional A(psi) = <psi|A psi>/<psi|psi>, the Schroedinger field
X_A(psi) = -(i/hbar) A psi satisfies dA(xi) = omega(X_A, xi) exactly (factor
one); the bracket then obeys {A,B}(psi) = C_OMEGA(hbar) * <[A,B]>/(2i) with
C_OMEGA = 2/hbar, frozen here and verified by the finite-difference invariant
tests rather than assumed.
"""

from __future__ import annotations

import io
from dataclasses import dataclass

import numpy as np
import numpy.linalg as npl

from .config import resolve_hbar
from .kahler import fs_symplectic
from .linops import dagger, expm_skew, require_hermitian
from .states import as_density, as_pure


def C_OMEGA(hbar: float | None = None) -> float:
    """Frozen bracket normalization: {A,B}_omega = C_OMEGA * <[A,B]>/(2i)."""
    return 2.0 / resolve_hbar(hbar)


def expectation(a, state) -> float:
    """<A> on a pure state vector or a density operator."""
    a = require_hermitian(a, "observable")
    state = np.asarray(state)
    if state.ndim == 1:
        psi = as_pure(state)
        if psi.shape[0] != a.shape[0]:
            raise ValueError("dimension mismatch")
        value = np.vdot(psi, a @ psi)
    else:
        rho = as_density(state)
        if rho.shape != a.shape:
            raise ValueError("dimension mismatch")
        value = np.trace(a @ rho)
    assert abs(value.imag) <= 1e-12 * max(1.0, abs(value)), "non-real expectation"
    return float(value.real)


def hamiltonian_field(h, psi, hbar: float | None = None) -> np.ndarray:
    """X_H(psi) = -(i/hbar) H psi."""
    h = require_hermitian(h, "hamiltonian")
    psi = np.asarray(psi, dtype=complex).reshape(-1)
    if psi.shape[0] != h.shape[0]:
        raise ValueError("dimension mismatch")
    return -1j / resolve_hbar(hbar) * (h @ psi)


def poisson_bracket(a, b, psi, hbar: float | None = None) -> float:
    """{A,B}_omega(psi) = omega(X_A, X_B) at psi.

    Equals C_OMEGA * <psi|[A,B]|psi>/(2i); the identity is asserted on every
    call as a normalization audit.
    """
    hbar = resolve_hbar(hbar)
    psi = as_pure(psi)
    xa = hamiltonian_field(a, psi, hbar)
    xb = hamiltonian_field(b, psi, hbar)
    value = fs_symplectic(psi, xa, xb, hbar)
    comm = a @ b - b @ a
    audit = C_OMEGA(hbar) * (np.vdot(psi, comm @ psi) / 2j).real
    assert abs(value - audit) <= 1e-12 * max(1.0, abs(value)), "bracket normalization drift"
    return value


@dataclass(frozen=True)
class HamiltonianSystem:
    """Time-independent Hamiltonian with a uniform step grid."""

    hamiltonian: np.ndarray
    hbar: float = 1.0
    time_step: float = 1.0
    steps: int = 1

    def __post_init__(self):
        h = require_hermitian(self.hamiltonian, "hamiltonian")
        object.__setattr__(self, "hamiltonian", h)
        if self.hbar <= 0 or self.time_step <= 0 or self.steps < 1:
            raise ValueError("need hbar > 0, time_step > 0, steps >= 1")

    @property
    def duration(self) -> float:
        return self.time_step * self.steps

    def times(self) -> np.ndarray:
        return self.time_step * np.arange(self.steps + 1)

    def step_propagator(self) -> np.ndarray:
        return expm_skew(-1j * self.time_step / self.hbar * self.hamiltonian)


def evolve_pure(sys: HamiltonianSystem, psi0) -> tuple[np.ndarray, np.ndarray]:
    """Solve i*hbar dpsi/dt = H psi on the step grid.

    Returns (times, states) with states of shape (steps+1, n).
    """
    psi0 = as_pure(psi0)
    w, v = npl.eigh(sys.hamiltonian)
    coeff = dagger(v) @ psi0
    times = sys.times()
    phases = np.exp(-1j * np.outer(times, w) / sys.hbar)
    states = (phases * coeff) @ v.T
    return times, states


def evolve_density(sys: HamiltonianSystem, rho0) -> tuple[np.ndarray, np.ndarray]:
    """von Neumann evolution rho(t) = U(t) rho0 U(t)†.

    Returns (times, trajectory) with trajectory of shape (steps+1, n, n).
    """
    rho0 = as_density(rho0)
    w, v = npl.eigh(sys.hamiltonian)
    r0 = dagger(v) @ rho0 @ v
    times = sys.times()
    phases = np.exp(-1j * np.outer(times, w) / sys.hbar)
    # rho(t) = V (phase_j conj(phase_k) r0_{jk}) V†, vectorized over t
    core = phases[:, :, None] * r0[None, :, :] * phases.conj()[:, None, :]
    traj = np.einsum("ij,tjk,lk->til", v, core, v.conj())
    return times, traj


def trajectory_to_csv(times, states) -> str:
    """CSV export: column t, then re/im interleaved state components."""
    states = np.asarray(states)
    flat = states.reshape(states.shape[0], -1)
    buf = io.StringIO()
    names = ["t"]
    for i in range(flat.shape[1]):
        names += [f"re_{i}", f"im_{i}"]
    buf.write(",".join(names) + "\n")
    for t, row in zip(times, flat):
        cells = [repr(float(t))]
        for z in row:
            cells += [repr(float(z.real)), repr(float(z.imag))]
        buf.write(",".join(cells) + "\n")
    return buf.getvalue()
