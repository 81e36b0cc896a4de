# src/qgeo/sampling.py

"""Random instances for property suites: Haar unitaries, random Hermitian
operators, random density operators with controlled spectra."""

from __future__ import annotations

import numpy as np

from .linops import dagger
from .states import Spectrum


def haar_unitary(rng: np.random.Generator, n: int) -> np.ndarray:
    z = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    q, r = np.linalg.qr(z)
    return q * (np.diag(r) / np.abs(np.diag(r)))


def random_pure(rng: np.random.Generator, n: int) -> np.ndarray:
    z = rng.normal(size=n) + 1j * rng.normal(size=n)
    return z / np.linalg.norm(z)


def random_hermitian(rng: np.random.Generator, n: int, scale: float = 1.0) -> np.ndarray:
    z = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    return scale * (z + dagger(z)) / 2


def random_spectrum(rng: np.random.Generator, dim: int,
                    rank: int | None = None,
                    max_multiplicity: int = 1) -> Spectrum:
    """Random spectrum with k_tot <= dim; multiplicities up to max_multiplicity."""
    if rank is None:
        rank = int(rng.integers(1, dim + 1))
    mults: list[int] = []
    left = rank
    while left > 0:
        m = int(rng.integers(1, min(max_multiplicity, left) + 1))
        mults.append(m)
        left -= m
    k = len(mults)
    raw = np.sort(rng.uniform(0.2, 1.0, size=k))[::-1]
    # enforce comfortable gaps between distinct values
    raw = raw + 0.5 * np.arange(k)[::-1]
    weights = raw / np.dot(raw, mults)
    return Spectrum(tuple(weights), tuple(mults))


def random_density(rng: np.random.Generator, dim: int,
                   sigma: Spectrum | None = None,
                   rank: int | None = None,
                   max_multiplicity: int = 1) -> np.ndarray:
    """Random density operator on the orbit of a (possibly random) spectrum."""
    if sigma is None:
        sigma = random_spectrum(rng, dim, rank, max_multiplicity)
    if sigma.k_tot > dim:
        raise ValueError("spectrum does not fit the dimension")
    u = haar_unitary(rng, dim)
    diag = np.zeros(dim)
    diag[:sigma.k_tot] = sigma.weights()
    return u @ np.diag(diag).astype(complex) @ dagger(u)
