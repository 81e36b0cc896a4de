# src/qgeo/uncertainty.py

"""Uncertainty functionals and the geometric uncertainty/dispersion identities.

Conventions (frozen by the normalization audit, asserted per call):

    (A,B)(rho) = (hbar/2) * G(X_A, X_B)      with X_A = (1/(i*hbar)) A psi,
    [A,B](rho) = (hbar/2) * Omega(X_A, X_B),

where (A,B), [A,B] are the expectations of the symmetrized product and the
commutator/(2i).  Splitting X into horizontal and vertical parts gives the
exact dispersion identity

    DeltaH^2 = (hbar/2) G(hor X_H, hor X_H) + (hbar/2) xi_perp . xi_perp

and, by Cauchy-Schwarz on the horizontal Hermitian form, the provable
geometric bound

    DeltaA * DeltaB >= (hbar/2) sqrt(G(hor X_A, hor X_B)^2
                                     + Omega(hor X_A, hor X_B)^2),

which reduces to the Robertson-Schroedinger bound on pure states.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .bundle import big_G, big_Omega, lie_metric, split, xi_field, xi_perp
from .config import resolve_hbar
from .dynamics import expectation
from .kahler import fs_metric, fs_symplectic
from .linops import anticommutator, commutator, require_hermitian
from .states import Purification, as_density, as_pure, purify


def delta(a, state) -> float:
    """DeltaA = sqrt(<A^2> - <A>^2); radicand clamped at 0 (assert >= -1e-12)."""
    a = require_hermitian(a, "observable")
    mean = expectation(a, state)
    second = expectation(a @ a, state)
    radicand = second - mean * mean
    assert radicand >= -1e-12, "variance radicand below rounding floor"
    return float(np.sqrt(max(0.0, radicand)))


def _pair_expectations(a, b, state) -> tuple[float, float]:
    """((A,B), [A,B]): symmetrized-product and commutator/(2i) expectations."""
    sym = expectation(anticommutator(a, b) / 2, state)
    comm = commutator(a, b)
    # (1/2i)(AB - BA) is Hermitian
    skew = expectation(comm / 2j, state)
    return sym, skew


def rs_bound(a, b, state) -> float:
    """Robertson-Schroedinger bound sqrt(((A,B) - AB)^2 + [A,B]^2)."""
    a, b = require_hermitian(a), require_hermitian(b)
    sym, skew = _pair_expectations(a, b, state)
    mean_a = expectation(a, state)
    mean_b = expectation(b, state)
    return float(np.hypot(sym - mean_a * mean_b, skew))


def geometric_bound_pure(a, b, psi, hbar: float | None = None) -> float:
    """Pure-state geometric bound sqrt({a,b}_omega^2 + (a,b)_g^2).

    Brackets evaluated from the Fubini-Study forms on the (projected) fields
    A psi, B psi; the equality with the Hilbert-space form
    (Im<AB> )^2 + (Re<AB> - AB)^2 is asserted within 1e-10.
    """
    hbar = resolve_hbar(hbar)
    psi = as_pure(psi)
    a, b = require_hermitian(a), require_hermitian(b)
    pa, pb = a @ psi, b @ psi
    g_br = fs_metric(psi, pa, pb, hbar) / (2 * hbar)
    om_br = fs_symplectic(psi, pa, pb, hbar) / (2 * hbar)
    inner = np.vdot(pa, pb)
    mean_a, mean_b = np.vdot(psi, pa).real, np.vdot(psi, pb).real
    hs_g = inner.real - mean_a * mean_b
    hs_om = inner.imag
    assert abs(g_br - hs_g) <= 1e-10 * max(1.0, abs(hs_g)), "g-bracket drift"
    assert abs(om_br - hs_om) <= 1e-10 * max(1.0, abs(hs_om)), "omega-bracket drift"
    return float(np.hypot(om_br, g_br))


def _horizontal_fields(a, b, psi: Purification, hbar: float):
    lift_a = (a @ psi.mat) / (1j * hbar)
    lift_b = (b @ psi.mat) / (1j * hbar)
    _, hor_a = split(psi, lift_a)
    _, hor_b = split(psi, lift_b)
    return lift_a, lift_b, hor_a, hor_b


def _audit_normalization(a, b, rho, lift_a, lift_b, hbar: float,
                         flip: bool = False) -> None:
    """Assert the defining proof identities at the call site.

    (A,B)(rho) = (hbar/2) G(X_A, X_B) and [A,B](rho) = (hbar/2) Omega(X_A, X_B)
    on the full (unprojected) lifts.  ``flip`` is a test hook that injects a
    wrong convention so negative-control suites can observe the audit firing.
    """
    factor = hbar if flip else hbar / 2
    sym, skew = _pair_expectations(a, b, rho)
    g_full = factor * big_G(lift_a, lift_b, hbar)
    om_full = factor * big_Omega(lift_a, lift_b, hbar)
    if not (abs(g_full - sym) <= 1e-10 * max(1.0, abs(sym))
            and abs(om_full - skew) <= 1e-10 * max(1.0, abs(skew))):
        raise AssertionError("normalization audit failed: convention drift")


def geometric_bound_mixed(a, b, rho, hbar: float | None = None,
                          spectral_tol: float = 1e-10,
                          psi: Purification | None = None,
                          _flip_convention: bool = False) -> float:
    """Geometric uncertainty bound for mixed states.

    (hbar/2) * sqrt(G(hor X_A, hor X_B)^2 + Omega(hor X_A, hor X_B)^2) at a
    purification of rho.  Gauge invariant; on rank-1 rho it equals the pure
    bound; DeltaA*DeltaB >= bound holds by Cauchy-Schwarz.
    """
    hbar = resolve_hbar(hbar)
    rho = as_density(rho)
    a, b = require_hermitian(a), require_hermitian(b)
    if psi is None:
        psi = purify(rho, spectral_tol)
    lift_a, lift_b, hor_a, hor_b = _horizontal_fields(a, b, psi, hbar)
    _audit_normalization(a, b, rho, lift_a, lift_b, hbar, _flip_convention)
    g_hor = big_G(hor_a, hor_b, hbar)
    om_hor = big_Omega(hor_a, hor_b, hbar)
    return float(hbar / 2 * np.hypot(g_hor, om_hor))


def dispersion_identity(h, rho, hbar: float | None = None,
                        spectral_tol: float = 1e-10
                        ) -> tuple[float, float, float]:
    """The energy-dispersion identity as an executable check.

    Returns (lhs, rhs, defect) with lhs = hbar^2 g(X_H, X_H) evaluated as
    (hbar/2) G(hor X_H, hor X_H) and rhs = DeltaH^2 - (hbar/2) xi_perp.xi_perp
    (the hbar/2 factor on the Lie term is the same normalization audit as the
    bounds above; the identity is exact in this convention).
    """
    hbar = resolve_hbar(hbar)
    rho = as_density(rho)
    h = require_hermitian(h, "hamiltonian")
    psi = purify(rho, spectral_tol)
    lift = (h @ psi.mat) / (1j * hbar)
    _, hor = split(psi, lift)
    lhs = hbar / 2 * big_G(hor, hor, hbar)
    xi = xi_field(h, psi, hbar)
    xp = xi_perp(xi, psi.sigma, hbar)
    rhs = delta(h, rho) ** 2 - hbar / 2 * lie_metric(xp, xp, psi.sigma, hbar)
    return float(lhs), float(rhs), float(abs(lhs - rhs))


@dataclass(frozen=True)
class UncertaintyReport:
    delta_a: float
    delta_b: float
    product: float
    rs_bound: float
    geometric_bound: float
    slack: float

    def to_json(self) -> str:
        return json.dumps({
            "delta_a": self.delta_a,
            "delta_b": self.delta_b,
            "product": self.product,
            "rs_bound": self.rs_bound,
            "geometric_bound": self.geometric_bound,
            "slack": self.slack,
        })


def uncertainty_report(a, b, state, hbar: float | None = None) -> UncertaintyReport:
    """Evaluate both bounds on a pure or mixed state."""
    state = np.asarray(state)
    da, db = delta(a, state), delta(b, state)
    rs = rs_bound(a, b, state)
    if state.ndim == 1:
        geo = geometric_bound_pure(a, b, state, hbar)
    else:
        geo = geometric_bound_mixed(a, b, state, hbar)
    product = da * db
    report = UncertaintyReport(da, db, product, rs,
                               geo, product - max(rs, geo))
    if report.slack < -1e-10:
        raise AssertionError("uncertainty bound violated beyond tolerance")
    return report
