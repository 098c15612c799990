"""Clifford (quantum) product on the exterior algebra and its deformation family.

The product is taken with respect to the rescaled metric ``hbar * g``, so
``eta eta' + eta' eta = 2 hbar g(eta, eta')`` and ``hbar = 0`` is the wedge.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .algebra import (
    Metric,
    Multivector,
    _same_dim,
    bits,
    reorder_sign,
    single_contraction,
    wedge,
)
from .errors import DimMismatch, FermiDynError


@dataclass(frozen=True)
class DeformationParameter:
    hbar: float = 1.0

    def __post_init__(self):
        h = float(self.hbar)
        if not math.isfinite(h) or h < 0:
            raise FermiDynError(f"hbar must be finite and nonnegative, got {self.hbar}")
        object.__setattr__(self, "hbar", h)


def _hbar(h) -> float:
    if isinstance(h, DeformationParameter):
        return h.hbar
    return DeformationParameter(h).hbar


def _check(A: Multivector, B: Multivector, m: Metric) -> int:
    dim = _same_dim(A, B)
    if dim != m.dim:
        raise DimMismatch(f"multivector dimension {dim} vs metric {m.dim}")
    return dim


# ---------------------------------------------------------------------------
# recursive blade product

def _vector_times_blade(i: int, b: int, m: Metric, hbar: float) -> list[tuple[int, float]]:
    """``e_{i+1} e_b = e_{i+1} ^ e_b + hbar * (e_{i+1} contracted into e_b)``."""
    out = []
    bit = 1 << i
    if not b & bit:
        out.append((b | bit, float(reorder_sign(bit, b))))
    if hbar:
        g = m.gram
        for k, j in enumerate(bits(b)):
            gij = g[i, j]
            if gij != 0.0:
                out.append((b & ~(1 << j), (-hbar if k & 1 else hbar) * gij))
    return out


def _blade_product(a: int, b: int, m: Metric, hbar: float) -> dict[int, float]:
    key = ("clifford", hbar, a, b)
    cache = m._cache
    hit = cache.get(key)
    if hit is not None:
        return hit
    if a == 0:
        out = {b: 1.0}
    elif m.is_diagonal:
        c = float(reorder_sign(a, b))
        if hbar != 1.0 or not m.is_identity:
            d = m.gram.diagonal()
            for j in bits(a & b):
                c *= hbar * d[j]
        out = {a ^ b: c} if c != 0.0 else {}
    else:
        # e_a = e_i ^ e_rest = e_i e_rest - (e_i contracted into e_rest), i lowest in a
        i = (a & -a).bit_length() - 1
        rest = a & ~(1 << i)
        acc: dict[int, float] = {}
        for mm, c in _blade_product(rest, b, m, hbar).items():
            for mk, ck in _vector_times_blade(i, mm, m, hbar):
                acc[mk] = acc.get(mk, 0.0) + c * ck
        if hbar:
            g = m.gram
            for k, j in enumerate(bits(rest)):
                gij = g[i, j]
                if gij == 0.0:
                    continue
                w = (-hbar if k & 1 else hbar) * gij
                for mm, c in _blade_product(rest & ~(1 << j), b, m, hbar).items():
                    acc[mm] = acc.get(mm, 0.0) - w * c
        out = {k: v for k, v in acc.items() if v != 0.0}
    cache[key] = out
    return out


def clifford_product(A: Multivector, B: Multivector, m: Metric, h=1.0) -> Multivector:
    """Clifford product ``A B`` with respect to ``hbar * g``."""
    dim = _check(A, B, m)
    hbar = _hbar(h)
    if hbar == 0.0:
        return wedge(A, B)
    acc: dict[int, float] = {}
    for a, ca in A:
        for b, cb in B:
            w = ca * cb
            for mm, c in _blade_product(a, b, m, hbar).items():
                acc[mm] = acc.get(mm, 0.0) + w * c
    return Multivector(dim, acc)


def clifford_commutator(A: Multivector, B: Multivector, m: Metric, h=1.0) -> Multivector:
    """``[A, B] = AB - BA``."""
    return clifford_product(A, B, m, h) - clifford_product(B, A, m, h)


def deformation_derivative(A: Multivector, B: Multivector, m: Metric) -> Multivector:
    """``d/dhbar (A B)`` at ``hbar = 0``: the single-contraction Wick terms."""
    _check(A, B, m)
    return single_contraction(A, B, m)


# ---------------------------------------------------------------------------
# Wick pairing enumeration

def _parity(seq: list[int]) -> int:
    inv = 0
    for x in range(len(seq)):
        for y in range(x + 1, len(seq)):
            if seq[x] > seq[y]:
                inv += 1
    return -1 if inv & 1 else 1


def _cross_matchings(p: int, q: int):
    """All sets of disjoint pairs (x, y), x < p <= y < p + q."""

    def rec(x, used):
        if x == p:
            yield []
            return
        yield from rec(x + 1, used)
        for y in range(p, p + q):
            if not used & (1 << y):
                for rest in rec(x + 1, used | (1 << y)):
                    yield [(x, y)] + rest

    return rec(0, 0)


def wick_blade_product(a: int, b: int, m: Metric, hbar: float = 1.0) -> dict[int, float]:
    """``e_a e_b`` as a signed sum over contraction sets of the factor vectors.

    Each blade is a wedge (fully antisymmetrised product) of its vectors, so
    only contractions linking a factor of ``e_a`` to one of ``e_b`` survive.
    """
    key = ("wick", hbar, a, b)
    hit = m._cache.get(key)
    if hit is not None:
        return hit
    vecs = bits(a) + bits(b)
    p = len(bits(a))
    g = m.gram
    out: dict[int, float] = {}
    for pairs in _cross_matchings(p, len(vecs) - p):
        coef = 1.0
        for x, y in pairs:
            coef *= hbar * g[vecs[x], vecs[y]]
            if coef == 0.0:
                break
        if coef == 0.0:
            continue
        paired = {z for pr in pairs for z in pr}
        remaining = [z for z in range(len(vecs)) if z not in paired]
        order = [z for pr in pairs for z in pr] + remaining
        left = [vecs[z] for z in remaining]
        if len(set(left)) != len(left):
            continue
        sign = _parity(order) * _parity(left)
        mask = sum(1 << v for v in left)
        out[mask] = out.get(mask, 0.0) + sign * coef
    m._cache[key] = out
    return out


def wick_product(A: Multivector, B: Multivector, m: Metric, h=1.0) -> Multivector:
    """Clifford product by full contraction enumeration; slow reference path."""
    dim = _check(A, B, m)
    hbar = _hbar(h)
    acc: dict[int, float] = {}
    for a, ca in A:
        for b, cb in B:
            w = ca * cb
            for mm, c in wick_blade_product(a, b, m, hbar).items():
                acc[mm] = acc.get(mm, 0.0) + w * c
    return Multivector(dim, acc)
