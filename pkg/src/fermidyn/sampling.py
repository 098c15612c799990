"""Seeded random elements for property suites."""

from __future__ import annotations

import itertools

import numpy as np

from .algebra import Generator, Metric, Multivector


def rng_from_seed(seed: int | None) -> np.random.Generator:
    return np.random.default_rng(seed)


def random_form(rng: np.random.Generator, dim: int, grade: int | None = None) -> Multivector:
    """Homogeneous form; grade uniform over ``0..dim`` unless given, coefficients in [-1, 1]."""
    if grade is None:
        grade = int(rng.integers(0, dim + 1))
    terms = {}
    for idx in itertools.combinations(range(dim), grade):
        terms[sum(1 << i for i in idx)] = rng.uniform(-1.0, 1.0)
    return Multivector(dim, terms)


def random_multivector(rng: np.random.Generator, dim: int) -> Multivector:
    """Every blade populated with a coefficient uniform in [-1, 1]."""
    return Multivector.from_array(dim, rng.uniform(-1.0, 1.0, size=1 << dim))


def random_vector(rng: np.random.Generator, dim: int) -> Multivector:
    return random_form(rng, dim, 1)


def random_spd(rng: np.random.Generator, dim: int, low: float = 0.5, high: float = 2.0) -> Metric:
    """Random SPD Gram matrix with spectrum in ``[low, high]``."""
    Q, _ = np.linalg.qr(rng.normal(size=(dim, dim)))
    G = Q @ np.diag(rng.uniform(low, high, size=dim)) @ Q.T
    return Metric(0.5 * (G + G.T))


def random_generator(rng: np.random.Generator, m: Metric, scale: float = 1.0) -> Generator:
    """``H = K G`` with ``K`` antisymmetric, which makes ``H`` anti-hermitian for ``g``."""
    X = rng.normal(scale=scale, size=(m.dim, m.dim))
    K = 0.5 * (X - X.T)
    return Generator(K @ m.gram, m)
