"""Brute-force dense-tensor reference implementations.

Everything here works on full ``n^p`` component arrays and evaluates the
index formulas by explicit antisymmetrisation.  No sign or product helper is
shared with the blade engine, so agreement between the two is meaningful.
Only intended for ``n <= 6``.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Literal

import numpy as np

from .algebra import Metric, Multivector
from .errors import DimMismatch, DimTooLarge, GradeOverflow, GradeTooLarge, NotAntisymmetric

ORACLE_MAX_DIM = 6
ANTISYM_TOL = 1e-12

Kind = Literal["wedge", "bracket", "clifford", "inner", "derivative"]


def permutation_sign(perm) -> int:
    """Sign of a permutation of ``range(len(perm))`` via its cycle decomposition."""
    perm = list(perm)
    seen = [False] * len(perm)
    sign = 1
    for start in range(len(perm)):
        if seen[start]:
            continue
        length = 0
        x = start
        while not seen[x]:
            seen[x] = True
            x = perm[x]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


@lru_cache(maxsize=None)
def _signed_perms(p: int) -> tuple[tuple[tuple[int, ...], int], ...]:
    return tuple((perm, permutation_sign(perm)) for perm in itertools.permutations(range(p)))


@lru_cache(maxsize=None)
def _antisym_plan(n: int, p: int) -> tuple[np.ndarray, np.ndarray]:
    """Flat gather indices of every index permutation, with their signs."""
    base = np.arange(n**p).reshape((n,) * p)
    perms = _signed_perms(p)
    idx = np.stack([np.transpose(base, perm).ravel() for perm, _ in perms])
    signs = np.array([s for _, s in perms], dtype=float) / math.factorial(p)
    return idx, signs


def antisymmetrize(T: np.ndarray) -> np.ndarray:
    """``T_[a1...ap]`` with the ``1/p!`` normalisation."""
    T = np.asarray(T, dtype=float)
    p = T.ndim
    if p < 2:
        return T.copy()
    if len(set(T.shape)) != 1:
        raise ValueError(f"antisymmetrize needs a cubical tensor, got shape {T.shape}")
    idx, signs = _antisym_plan(T.shape[0], p)
    return (signs @ T.ravel()[idx]).reshape(T.shape)


@dataclass(frozen=True, eq=False)
class DenseForm:
    """Totally antisymmetric rank-``grade`` tensor over an ``dim``-dimensional space."""

    dim: int
    grade: int
    components: np.ndarray

    def __post_init__(self):
        if self.dim > ORACLE_MAX_DIM:
            raise DimTooLarge(f"oracle supports dim <= {ORACLE_MAX_DIM}, got {self.dim}")
        if self.grade > self.dim:
            raise GradeTooLarge(f"grade {self.grade} exceeds dimension {self.dim}")
        C = np.array(self.components, dtype=float)
        if C.shape != (self.dim,) * self.grade:
            raise DimMismatch(f"components of shape {C.shape} for grade {self.grade}, dim {self.dim}")
        scale = max(1.0, float(np.max(np.abs(C))) if C.size else 0.0)
        if np.max(np.abs(antisymmetrize(C) - C), initial=0.0) > ANTISYM_TOL * scale:
            raise NotAntisymmetric("components are not totally antisymmetric")
        C.setflags(write=False)
        object.__setattr__(self, "components", C)

    @classmethod
    def zero(cls, dim: int, grade: int) -> "DenseForm":
        return cls(dim, grade, np.zeros((dim,) * grade))


def _check_dim(n: int):
    if n > ORACLE_MAX_DIM:
        raise DimTooLarge(f"oracle supports dim <= {ORACLE_MAX_DIM}, got {n}")


def to_dense(A: Multivector, p: int) -> DenseForm:
    """Grade-``p`` part of ``A`` as a dense antisymmetric tensor."""
    n = A.dim
    _check_dim(n)
    if p > n or p < 0:
        raise GradeTooLarge(f"grade {p} outside 0..{n}")
    C = np.zeros((n,) * p)
    for blade, c in A.blades():
        if blade.grade != p:
            continue
        idx = [i - 1 for i in blade.indices]
        for perm, s in _signed_perms(p):
            C[tuple(idx[k] for k in perm)] = s * c
    return DenseForm(n, p, C)


def from_dense(D: DenseForm) -> Multivector:
    terms = {}
    for idx in itertools.combinations(range(D.dim), D.grade):
        c = D.components[idx] if D.grade else float(D.components)
        if c != 0.0:
            terms[tuple(i + 1 for i in idx)] = float(c)
    return Multivector.from_terms(D.dim, terms)


def dense_parts(A: Multivector) -> dict[int, DenseForm]:
    return {p: to_dense(A, p) for p in sorted(A.grades())}


def from_dense_parts(parts, dim: int) -> Multivector:
    out = Multivector.zero(dim)
    for D in (parts.values() if isinstance(parts, dict) else parts):
        out = out + from_dense(D)
    return out


# ---------------------------------------------------------------------------
# formulas

def _pair(A: DenseForm, B: DenseForm) -> int:
    if A.dim != B.dim:
        raise DimMismatch(f"dimensions differ: {A.dim} vs {B.dim}")
    _check_dim(A.dim)
    return A.dim


def dense_wedge(A: DenseForm, B: DenseForm) -> DenseForm:
    n = _pair(A, B)
    p, q = A.grade, B.grade
    if p + q > n:
        raise GradeOverflow(f"wedge of grades {p} and {q} exceeds dimension {n}")
    T = np.multiply.outer(A.components, B.components)
    coef = math.factorial(p + q) / (math.factorial(p) * math.factorial(q))
    return DenseForm(n, p + q, coef * antisymmetrize(T))


def dense_bracket(A: DenseForm, B: DenseForm, m: Metric,
                  convention: Literal["derivation", "literal"] = "derivation") -> DenseForm:
    """Contract the last index of ``A`` with the first of ``B`` through ``g``, antisymmetrise.

    ``literal`` uses the prefactor ``2pq``; ``derivation`` uses
    ``2 (p+q-2)! / ((p-1)! (q-1)!)``.
    """
    n = _pair(A, B)
    p, q = A.grade, B.grade
    if p == 0 or q == 0:
        return DenseForm.zero(n, max(p + q - 2, 0))
    r = p + q - 2
    if r > n:
        raise GradeOverflow(f"bracket of grades {p} and {q} exceeds dimension {n}")
    T = np.tensordot(np.tensordot(A.components, m.gram, axes=([p - 1], [0])),
                     B.components, axes=([p - 1], [0]))
    if convention == "literal":
        coef = 2.0 * p * q
    elif convention == "derivation":
        coef = 2.0 * math.factorial(r) / (math.factorial(p - 1) * math.factorial(q - 1))
    else:
        raise ValueError(f"unknown bracket convention {convention!r}")
    return DenseForm(n, r, coef * antisymmetrize(T))


def dense_inner(A: DenseForm, B: DenseForm, m: Metric) -> float:
    n = _pair(A, B)
    if A.grade != B.grade:
        return 0.0
    p = A.grade
    T = A.components
    for _ in range(p):
        # contracts the leading axis with g and rotates it to the back
        T = np.tensordot(T, m.gram, axes=([0], [0]))
    return float(np.sum(T * B.components)) / math.factorial(p)


def dense_derivative(A: DenseForm, m: Metric) -> list[DenseForm]:
    n = A.dim
    _check_dim(n)
    if A.grade == 0:
        return [DenseForm.zero(n, 0) for _ in range(n)]
    return [DenseForm(n, A.grade - 1, np.tensordot(m.gram[a], A.components, axes=([0], [0])))
            for a in range(n)]


@lru_cache(maxsize=None)
def _basis_wedge(n: int, vecs: tuple[int, ...]) -> np.ndarray:
    """Dense tensor of ``e_{v1} ^ ... ^ e_{vk}`` in the given order."""
    k = len(vecs)
    T = np.ones(())
    for v in vecs:
        e = np.zeros(n)
        e[v] = 1.0
        T = np.multiply.outer(T, e)
    return math.factorial(k) * antisymmetrize(T)


def _factored(D: DenseForm) -> list[tuple[tuple[int, ...], float]]:
    out = []
    for idx in itertools.combinations(range(D.dim), D.grade):
        c = float(D.components[idx]) if D.grade else float(D.components)
        if c != 0.0:
            out.append((idx, c))
    return out


@lru_cache(maxsize=65536)
def _pairings(ia: tuple[int, ...], ib: tuple[int, ...], gram: bytes, n: int, hbar: float):
    """Contraction sets of ``e_ia e_ib`` as ``(ordered remainder, weight)`` pairs."""
    g = np.frombuffer(gram).reshape(n, n)
    vecs = ia + ib
    p, q = len(ia), len(ib)
    out: dict[tuple[int, ...], float] = {}
    for k in range(min(p, q) + 1):
        for xs in itertools.combinations(range(p), k):
            for ys in itertools.permutations(range(p, p + q), k):
                coef = 1.0
                for x, y in zip(xs, ys):
                    coef *= hbar * g[vecs[x], vecs[y]]
                if coef == 0.0:
                    continue
                used = set(xs) | set(ys)
                rest = [z for z in range(p + q) if z not in used]
                left = tuple(vecs[z] for z in rest)
                if len(set(left)) != len(left):
                    continue
                order = [z for pair in zip(xs, ys) for z in pair] + rest
                out[left] = out.get(left, 0.0) + permutation_sign(order) * coef
    return tuple(out.items())


def dense_clifford(A: DenseForm, B: DenseForm, m: Metric, hbar: float = 1.0) -> dict[int, DenseForm]:
    """Clifford product by enumerating every contraction set of the factor vectors.

    Contractions are only formed between a factor of ``A`` and a factor of
    ``B``; each contracted pair is moved next to each other at the front and
    the sign of that rearrangement is applied.  Uncontracted factors are
    wedged in their original order.
    """
    n = _pair(A, B)
    gram = np.ascontiguousarray(m.gram, dtype=float).tobytes()
    weights: dict[tuple[int, ...], float] = {}
    for ia, ca in _factored(A):
        for ib, cb in _factored(B):
            for left, w in _pairings(ia, ib, gram, n, float(hbar)):
                weights[left] = weights.get(left, 0.0) + ca * cb * w
    acc: dict[int, np.ndarray] = {}
    for left, w in weights.items():
        if w != 0.0:
            acc[len(left)] = acc.get(len(left), 0.0) + w * _basis_wedge(n, left)
    return {r: DenseForm(n, r, np.asarray(T)) for r, T in sorted(acc.items())}


def oracle_product(kind: Kind, A: DenseForm, B: DenseForm | None, m: Metric, **kw):
    """Dispatch to the dense formula for ``kind``.

    Returns a DenseForm (wedge, bracket), a float (inner), a list of
    DenseForms indexed by slot (derivative) or a grade -> DenseForm dict
    (clifford).
    """
    if A.dim != m.dim:
        raise DimMismatch(f"form dimension {A.dim} vs metric {m.dim}")
    if kind == "wedge":
        return dense_wedge(A, B)
    if kind == "bracket":
        return dense_bracket(A, B, m, **kw)
    if kind == "inner":
        return dense_inner(A, B, m)
    if kind == "derivative":
        return dense_derivative(A, m)
    if kind == "clifford":
        return dense_clifford(A, B, m, **kw)
    raise ValueError(f"unknown oracle kind {kind!r}")


# ---------------------------------------------------------------------------
# multivector-level wrappers for comparison sweeps

def oracle_multivector(kind: Kind, A: Multivector, B: Multivector | None, m: Metric, **kw):
    """Evaluate ``kind`` grade pair by grade pair and reassemble a Multivector (or float)."""
    n = A.dim
    pa = dense_parts(A)
    if kind == "derivative":
        out = [Multivector.zero(n) for _ in range(n)]
        for D in pa.values():
            for a, Da in enumerate(dense_derivative(D, m)):
                out[a] = out[a] + from_dense(Da)
        return out
    pb = dense_parts(B)
    if kind == "inner":
        return sum(dense_inner(pa[p], pb[p], m) for p in pa if p in pb)
    out = Multivector.zero(n)
    for Da in pa.values():
        for Db in pb.values():
            try:
                res = oracle_product(kind, Da, Db, m, **kw)
            except GradeOverflow:
                continue
            if isinstance(res, dict):
                out = out + from_dense_parts(res, n)
            else:
                out = out + from_dense(res)
    return out
