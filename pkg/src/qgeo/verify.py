# src/qgeo/verify.py

"""Programmatic invariant suites (the `qgeo verify` command).

Each suite samples random instances, measures its worst defect against the
suite tolerance and reports a machine-readable record.  ``flip_convention``
is a negative-control hook: it injects a wrong normalization into the audit
suites, which must then fail — demonstrating that the audits are live.
"""

from __future__ import annotations

import numpy as np
import numpy.linalg as npl

from . import bundle, dynamics, holonomy, kahler, linops, measures, uncertainty
from .linops import dagger
from .sampling import (haar_unitary, random_density, random_hermitian,
                       random_pure, random_spectrum)
from .states import Purification, p_sigma, projector, purify


def _suite(name, worst, tol, samples):
    return {
        "suite": name,
        "passed": bool(worst <= tol),
        "worst_defect": float(worst),
        "tolerance": float(tol),
        "samples": int(samples),
    }


def suite_linops(rng, n_samples):
    worst = 0.0
    for _ in range(n_samples):
        dim = int(rng.integers(2, 9))
        a, b = random_hermitian(rng, dim), random_hermitian(rng, dim)
        worst = max(worst, abs(np.trace(a @ b) - np.trace(b @ a)))
        u = linops.expm_skew(1j * random_hermitian(rng, dim))
        worst = max(worst, npl.norm(dagger(u) @ u - np.eye(dim)))
        w, v = linops.hermitian_eig(a)
        worst = max(worst, npl.norm((v * w) @ dagger(v) - a))
    return _suite("linops", worst, 1e-10, n_samples)


def suite_kahler(rng, n_samples):
    worst = 0.0
    for _ in range(n_samples):
        dim = int(rng.integers(2, 7))
        psi = random_pure(rng, dim)
        p1 = rng.normal(size=dim) + 1j * rng.normal(size=dim)
        p2 = rng.normal(size=dim) + 1j * rng.normal(size=dim)
        u = haar_unitary(rng, dim)
        worst = max(worst, abs(kahler.fs_metric(u @ psi, u @ p1, u @ p2)
                               - kahler.fs_metric(psi, p1, p2)))
        # compatibility g(a,b) = omega(a, i b)
        worst = max(worst, abs(kahler.metric_G(p1, p2)
                               - kahler.symplectic_Omega(p1, 1j * p2)))
        # submersion consistency on perpendicular representatives
        q1, q2 = kahler.project_perp(psi, p1), kahler.project_perp(psi, p2)
        worst = max(worst, abs(kahler.fs_symplectic(psi, q1, q2)
                               - kahler.symplectic_Omega(q1, q2)))
    return _suite("kahler", worst, 1e-9, n_samples)


def suite_dynamics_conservation(rng, n_samples):
    worst = 0.0
    for _ in range(n_samples):
        dim = int(rng.integers(2, 5))
        h = random_hermitian(rng, dim)
        sys = dynamics.HamiltonianSystem(h, 1.0, 0.05, 200)
        psi0 = random_pure(rng, dim)
        _, states = dynamics.evolve_pure(sys, psi0)
        energies = [dynamics.expectation(h, s) for s in states[::20]]
        worst = max(worst, max(energies) - min(energies))
        rho0 = random_density(rng, dim)
        _, traj = dynamics.evolve_density(sys, rho0)
        spec0 = npl.eigvalsh(traj[0])
        worst = max(worst, max(npl.norm(npl.eigvalsh(r) - spec0)
                               for r in traj[::20]))
    return _suite("dynamics_conservation", worst, 1e-11, n_samples)


def suite_hamiltonian_flow(rng, n_samples, flip=False):
    """Finite-difference audit of dH(xi) = omega(X_H, xi)."""
    worst = 0.0
    factor = 2.0 if flip else 1.0
    for _ in range(n_samples):
        dim = int(rng.integers(2, 7))
        h = random_hermitian(rng, dim)
        psi = random_pure(rng, dim)
        xi = rng.normal(size=dim) + 1j * rng.normal(size=dim)

        def rayleigh(v):
            return (np.vdot(v, h @ v) / np.vdot(v, v)).real

        step = 1e-6
        fd = (rayleigh(psi + step * xi) - rayleigh(psi - step * xi)) / (2 * step)
        xh = factor * dynamics.hamiltonian_field(h, psi)
        worst = max(worst, abs(fd - kahler.fs_symplectic(psi, xh, xi)))
    return _suite("hamiltonian_flow_fd", worst, 1e-6, n_samples)


def suite_connection_axioms(rng, n_samples):
    worst = 0.0
    for _ in range(n_samples):
        dim = int(rng.integers(2, 7))
        sigma = random_spectrum(rng, dim, max_multiplicity=3)
        rho = random_density(rng, dim, sigma=sigma)
        psi = purify(rho)
        sigma = psi.sigma
        xi = bundle.random_gauge_element(sigma, rng)
        # reproducing property
        worst = max(worst, npl.norm(bundle.connection(psi, psi.mat @ xi) - xi))
        # anti-Hermiticity and P-commutation of a generic connection value;
        # make a random matrix tangent by removing the Hermitian part of psi†z
        z = rng.normal(size=psi.mat.shape) + 1j * rng.normal(size=psi.mat.shape)
        x = z - 0.5 * psi.mat @ npl.solve(
            p_sigma(sigma), dagger(psi.mat) @ z + dagger(z) @ psi.mat
        )
        a = bundle.connection(psi, x)
        worst = max(worst, npl.norm(a + dagger(a)))
        p = p_sigma(sigma)
        worst = max(worst, npl.norm(a @ p - p @ a))
        # gauge equivariance
        v = bundle.random_gauge_unitary(sigma, rng)
        psi_v = Purification(psi.mat @ v, sigma)
        worst = max(worst, npl.norm(bundle.connection(psi_v, x @ v)
                                    - dagger(v) @ a @ v))
        # split orthogonality and reconstruction
        vert, hor = bundle.split(psi, x)
        worst = max(worst, abs(bundle.big_G(vert, hor)))
        worst = max(worst, npl.norm(vert + hor - x))
        worst = max(worst, npl.norm(bundle.connection(psi, hor)))
        # momentum-map pairing against a u(sigma) basis
        for eta in bundle.u_sigma_basis(sigma):
            lhs = bundle.lie_metric(a, eta, sigma)
            rhs = bundle.big_G(x, psi.mat @ eta)
            worst = max(worst, abs(lhs - rhs))
    return _suite("connection_axioms", worst, 1e-9, n_samples)


def suite_uncertainty(rng, n_samples, flip=False):
    worst = 0.0
    for _ in range(n_samples):
        dim = int(rng.integers(2, 7))
        rho = random_density(rng, dim, max_multiplicity=2)
        a, b = random_hermitian(rng, dim), random_hermitian(rng, dim)
        try:
            geo = uncertainty.geometric_bound_mixed(a, b, rho,
                                                    _flip_convention=flip)
        except AssertionError:
            worst = np.inf
            break
        product = uncertainty.delta(a, rho) * uncertainty.delta(b, rho)
        rs = uncertainty.rs_bound(a, b, rho)
        worst = max(worst, geo - product, rs - product)
        # Cauchy-Schwarz structure
        gaa = uncertainty.geometric_bound_mixed(a, a, rho)
        gbb = uncertainty.geometric_bound_mixed(b, b, rho)
        worst = max(worst, geo * geo - gaa * gbb)
    return _suite("uncertainty_bounds", worst, 1e-10, n_samples)


def suite_dispersion(rng, n_samples):
    worst = 0.0
    for _ in range(n_samples):
        dim = int(rng.integers(2, 7))
        rho = random_density(rng, dim, rank=int(rng.integers(1, min(4, dim) + 1)),
                             max_multiplicity=2)
        h = random_hermitian(rng, dim)
        _, _, defect = uncertainty.dispersion_identity(h, rho)
        worst = max(worst, defect)
    return _suite("dispersion_identity", worst, 1e-9, n_samples)


def suite_distance_axioms(rng, n_samples):
    worst = 0.0
    fns = (measures.fs_distance, measures.trace_distance, measures.hs_distance)
    for _ in range(n_samples):
        dim = int(rng.integers(2, 7))
        p1, p2, p3 = (random_pure(rng, dim) for _ in range(3))
        u = haar_unitary(rng, dim)
        for fn in fns:
            worst = max(worst, abs(fn(p1, p2) - fn(p2, p1)))
            worst = max(worst, fn(p1, p3) - fn(p1, p2) - fn(p2, p3))
            worst = max(worst, abs(fn(u @ p1, u @ p2) - fn(p1, p2)))
        worst = max(worst, measures.fs_distance(p1, p2)
                    - measures.hs_distance(p1, p2))
        worst = max(worst, measures.hs_distance(p1, p2)
                    - measures.trace_distance(p1, p2))
    return _suite("distance_axioms", worst, 1e-12, n_samples)


def suite_probability(rng, n_samples):
    worst = 0.0
    for _ in range(n_samples):
        dim = int(rng.integers(2, 9))
        p0, p = random_pure(rng, dim), random_pure(rng, dim)
        d0 = measures.probability(p0, p)
        worst = max(worst, abs(d0 - np.cos(measures.kappa(p0, p)) ** 2))
        worst = max(worst, abs(d0 - np.trace(projector(p0) @ projector(p)).real))
    return _suite("probability_consistency", worst, 1e-12, n_samples)


def suite_holonomy_gauge(rng, n_samples):
    worst = 0.0
    for _ in range(n_samples):
        dim = int(rng.integers(2, 5))
        sigma = random_spectrum(rng, dim, max_multiplicity=2)
        rho0 = random_density(rng, dim, sigma=sigma)
        curve = random_closed_curve(rng, rho0, steps=512)
        gamma = holonomy.geometric_phase(curve)
        v0 = bundle.random_gauge_unitary(curve.sigma, rng)
        xi = 0.5 * bundle.random_gauge_element(curve.sigma, rng)
        gauges = np.stack([
            linops.expm_skew(np.sin(np.pi * t / curve.times[-1]) * xi) @ v0
            for t in curve.times
        ])
        gamma2 = holonomy.geometric_phase(curve.regauge(gauges))
        worst = max(worst, holonomy.circular_distance(gamma, gamma2))
    return _suite("holonomy_gauge_invariance", worst, 1e-7, n_samples)


def random_closed_curve(rng, rho0, steps=256, tau=1.0):
    """Random smooth closed curve in D(sigma) through rho0.

    W(t) = exp(-i f(t) A) exp(-i g(t) B) with smooth f, g vanishing at both
    endpoints: W(0) = W(tau) = I exactly, and noncommuting A, B make the loop
    non-retraced.
    """
    n = rho0.shape[0]
    a = random_hermitian(rng, n)
    b = random_hermitian(rng, n)

    def closed_u(t):
        s = np.pi * t / tau
        f, g = np.sin(s) ** 2, np.sin(s) ** 3
        return linops.expm_skew(-1j * f * a) @ linops.expm_skew(-1j * g * b)

    times = np.linspace(0.0, tau, steps + 1)
    psi0 = purify(rho0)
    samples = np.stack([closed_u(t) @ psi0.mat for t in times])
    return holonomy.StateCurve(times, samples, psi0.sigma)


ALL_SUITES = (
    ("linops", suite_linops, False),
    ("kahler", suite_kahler, False),
    ("dynamics_conservation", suite_dynamics_conservation, False),
    ("hamiltonian_flow_fd", suite_hamiltonian_flow, True),
    ("connection_axioms", suite_connection_axioms, False),
    ("uncertainty_bounds", suite_uncertainty, True),
    ("dispersion_identity", suite_dispersion, False),
    ("distance_axioms", suite_distance_axioms, False),
    ("probability_consistency", suite_probability, False),
    ("holonomy_gauge_invariance", suite_holonomy_gauge, False),
)


def run_suites(seed: int = 0, samples: int = 50,
               flip_convention: bool = False) -> dict:
    """Run every invariant suite; returns the machine-readable report."""
    import zlib

    results = []
    for name, fn, has_flip in ALL_SUITES:
        rng = np.random.default_rng([seed, zlib.crc32(name.encode())])
        n = max(3, samples // 10) if name == "holonomy_gauge_invariance" else samples
        if has_flip:
            results.append(fn(rng, n, flip=flip_convention))
        else:
            results.append(fn(rng, n))
    return {
        "seed": int(seed),
        "flip_convention": bool(flip_convention),
        "passed": all(r["passed"] for r in results),
        "suites": results,
    }
