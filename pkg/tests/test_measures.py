"""Distances, probabilities, measurement.

Oracles: scipy-based fidelity sqrtm formula, the qubit fidelity identity
F = Tr(rho sigma) + 2 sqrt(det rho det sigma), direct overlap formulas for
pure-state distances, and Born statistics for projective measurement.
"""

import numpy as np
import pytest
import scipy.linalg as sla

from qgeo.measures import (SearchConfig, bures, bures_family_closed_form,
                           bures_qubit, curve_length, dynamic_distance,
                           fidelity, fs_distance, hs_distance, kappa, measure,
                           mixed_probability, probability, rotation_family,
                           trace_distance)
from qgeo.sampling import (haar_unitary, random_density, random_hermitian,
                           random_pure)

from conftest import make_rng


def test_kappa_and_pure_distances_oracle():
    rng = make_rng(71)
    for _ in range(50):
        n = int(rng.integers(2, 7))
        p1, p2 = random_pure(rng, n), random_pure(rng, n)
        ov = abs(np.vdot(p1, p2))
        assert np.isclose(kappa(p1, p2), np.arccos(min(ov, 1.0)), atol=1e-12)
        # chordal distances recomputed from the overlap
        assert np.isclose(fs_distance(p1, p2),
                          np.sqrt(2 * (1 - ov)), atol=1e-10)
        assert np.isclose(trace_distance(p1, p2),
                          2 * np.sqrt(1 - ov * ov), atol=1e-10)
        assert np.isclose(hs_distance(p1, p2),
                          np.sqrt(2 * (1 - ov * ov)), atol=1e-10)
        # ordering D_FS <= D_HS <= D
        assert fs_distance(p1, p2) <= hs_distance(p1, p2) + 1e-12
        assert hs_distance(p1, p2) <= trace_distance(p1, p2) + 1e-12


def test_probability_is_squared_overlap():
    rng = make_rng(72)
    for _ in range(30):
        p1, p2 = random_pure(rng, 4), random_pure(rng, 4)
        ov2 = abs(np.vdot(p1, p2)) ** 2
        assert np.isclose(probability(p1, p2), ov2, atol=1e-12)
        assert np.isclose(probability(p1, p2),
                          np.cos(kappa(p1, p2)) ** 2, atol=1e-12)


def test_mixed_probability_trace_formula():
    rng = make_rng(73)
    rho0 = random_density(rng, 3)
    rho1 = random_density(rng, 3)
    assert np.isclose(mixed_probability(rho0, rho1),
                      np.trace(rho0 @ rho1).real, atol=1e-12)


def test_fidelity_against_sqrtm_oracle():
    rng = make_rng(74)
    for _ in range(20):
        n = int(rng.integers(2, 5))
        r0, r1 = random_density(rng, n), random_density(rng, n)
        s = sla.sqrtm(r0)
        oracle = np.trace(sla.sqrtm(s @ r1 @ s)).real ** 2
        assert np.isclose(fidelity(r0, r1), oracle, atol=1e-9)
        assert np.isclose(bures(r0, r1),
                          np.sqrt(2 * (1 - np.sqrt(oracle))), atol=1e-9)


def test_bures_qubit_determinant_identity():
    # qubit oracle: F = Tr(r0 r1) + 2 sqrt(det r0 det r1)
    rng = make_rng(75)
    for _ in range(50):
        r0, r1 = random_density(rng, 2), random_density(rng, 2)
        f = np.trace(r0 @ r1).real + 2 * np.sqrt(
            max(np.linalg.det(r0).real, 0.0)
            * max(np.linalg.det(r1).real, 0.0))
        assert np.isclose(bures_qubit(r0, r1),
                          np.sqrt(2 * (1 - np.sqrt(f))), atol=1e-10)


def test_bures_closed_form_small_angle_only():
    # the closed form is exact only to O(sin^2 eps): tight at small eps,
    # visibly off at eps = pi/4
    lam1, lam2 = 0.7, 0.3
    for eps in (1e-3, 5e-3):
        r0 = rotation_family(lam1, lam2, 0.0)
        r1 = rotation_family(lam1, lam2, eps)
        closed = bures_family_closed_form(lam1, lam2, eps)
        assert abs(closed - bures_qubit(r0, r1)) < 5e-8
    r1 = rotation_family(lam1, lam2, np.pi / 4)
    big = abs(bures_family_closed_form(lam1, lam2, np.pi / 4)
              - bures_qubit(rotation_family(lam1, lam2, 0.0), r1))
    assert big > 1e-4


def test_distance_axioms_random_triples():
    rng = make_rng(76)
    for _ in range(40):
        n = int(rng.integers(2, 5))
        a, b, c = (random_pure(rng, n) for _ in range(3))
        for d in (fs_distance, trace_distance, hs_distance, kappa):
            # self-distance: sqrt amplifies roundoff in the overlap to 1e-8
            assert abs(d(a, a)) < 1e-7
            assert np.isclose(d(a, b), d(b, a), atol=1e-12)
            assert d(a, b) + d(b, c) >= d(a, c) - 1e-12
            u = haar_unitary(rng, n)
            assert np.isclose(d(u @ a, u @ b), d(a, b), atol=1e-10)
        ra, rb, rc = (random_density(rng, n) for _ in range(3))
        assert abs(bures(ra, ra)) < 1e-7
        assert np.isclose(bures(ra, rb), bures(rb, ra), atol=1e-10)
        assert bures(ra, rb) + bures(rb, rc) >= bures(ra, rc) - 1e-10
        u = haar_unitary(rng, n)
        uh = u.conj().T
        assert np.isclose(bures(u @ ra @ uh, u @ rb @ uh),
                          bures(ra, rb), atol=1e-9)


def test_curve_length_of_rotation_family():
    lam1, lam2 = 0.7, 0.3
    from qgeo.linops import SIGMA_2
    for eps in (0.005, 0.02):
        ts = np.linspace(0.0, 1.0, 101)
        rhos = np.stack([rotation_family(lam1, lam2, eps * t) for t in ts])
        length = curve_length(ts, rhos, eps * SIGMA_2, hbar=1.0)
        assert abs(length - eps) < 1e-10


def test_curve_length_rejects_inconsistent_generator():
    lam1, lam2 = 0.7, 0.3
    from qgeo.linops import SIGMA_2, SIGMA_3
    ts = np.linspace(0.0, 1.0, 101)
    rhos = np.stack([rotation_family(lam1, lam2, 0.02 * t) for t in ts])
    with pytest.raises(ValueError):
        curve_length(ts, rhos, 0.02 * SIGMA_3, hbar=1.0)


def test_dynamic_distance_small_rotation():
    search = SearchConfig(segments=4, restarts=4, max_iter=120, seed=0)
    r0 = rotation_family(0.7, 0.3, 0.0)
    r1 = rotation_family(0.7, 0.3, 0.01)
    report = dynamic_distance(r0, r1, search, hbar=1.0)
    assert report.method == "dynamic"
    assert report.metadata["upper_bound"]
    assert abs(report.value - 0.01) < 5e-4


def test_dynamic_distance_rejects_different_orbits():
    with pytest.raises(ValueError):
        dynamic_distance(np.diag([0.7, 0.3]).astype(complex),
                         np.diag([0.6, 0.4]).astype(complex))


def test_measure_born_statistics():
    rng = make_rng(77)
    a = np.diag([1.0, -1.0]).astype(complex)
    psi = np.array([0.6, 0.8], dtype=complex)
    counts = {1.0: 0, -1.0: 0}
    shots = 4000
    for s in range(shots):
        out = measure(a, psi, rng_seed=s)
        counts[out.eigenvalue] += 1
        # post state is the normalized projection
        idx = 0 if out.eigenvalue == 1.0 else 1
        expect = np.zeros(2, dtype=complex)
        expect[idx] = 1.0
        assert np.allclose(np.abs(out.post_state), np.abs(expect), atol=1e-12)
    assert abs(counts[1.0] / shots - 0.36) < 0.025  # ~3 sigma


def test_measure_degenerate_observable():
    a = np.diag([2.0, 2.0, -1.0]).astype(complex)
    psi = np.array([0.6, 0.0, 0.8], dtype=complex)
    out = measure(a, psi, rng_seed=1)
    assert set(out.outcomes) == {2.0, -1.0}
    assert np.isclose(sum(out.probabilities), 1.0, atol=1e-12)
