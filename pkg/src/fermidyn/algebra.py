"""Exterior algebra of observables over a real orthogonal phase space.

Elements are stored as sparse maps from basis blades to real coefficients.
A basis blade ``e{i1,...,ip}`` (``i1 < ... < ip``, 1-based) is encoded as the
bitmask with bit ``i-1`` set for each index ``i``.  The tensor components of
``c * e{i1,...,ip}`` are ``A^{i1...ip} = c`` on the ascending index tuple and
``sgn(sigma) * c`` on its permutations.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from types import MappingProxyType
from typing import Iterable, Iterator, Literal, Mapping, Sequence

import numpy as np

from .errors import (
    DimMismatch,
    DimTooLarge,
    FermiDynError,
    NonSymmetric,
    NotAntiHermitian,
    NotAVector,
    NotOrthogonal,
    NotPositiveDefinite,
    NotTwoForm,
)

MAX_DIM = 16
MAP_TOL = 1e-10

BracketConvention = Literal["derivation", "literal"]


# ---------------------------------------------------------------------------
# bitmask helpers

def bits(mask: int) -> list[int]:
    """0-based positions of the set bits of ``mask``, ascending."""
    out = []
    i = 0
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return out


def grade_of(mask: int) -> int:
    return mask.bit_count()


def reorder_sign(a: int, b: int) -> int:
    """Sign of sorting the concatenation of ascending blades ``a`` then ``b``.

    Counts the pairs (i in a, j in b) with i > j.  Only meaningful for
    disjoint masks.
    """
    a >>= 1
    swaps = 0
    while a:
        swaps += (a & b).bit_count()
        a >>= 1
    return -1 if swaps & 1 else 1


# ---------------------------------------------------------------------------
# phase space

@dataclass(frozen=True, eq=False)
class Metric:
    """Positive-definite inner product ``g`` on an ``n``-dimensional space.

    ``gram[i][j] = g(e_{i+1}, e_{j+1})``.  Validated on construction.
    """

    gram: np.ndarray
    _cache: dict = field(default_factory=dict, init=False, repr=False)

    def __post_init__(self):
        g = np.array(self.gram, dtype=float)
        if g.ndim != 2 or g.shape[0] != g.shape[1]:
            raise FermiDynError(f"gram must be square, got shape {g.shape}")
        n = g.shape[0]
        if n < 1:
            raise FermiDynError("dimension must be at least 1")
        if n > MAX_DIM:
            raise DimTooLarge(f"dimension {n} exceeds cap {MAX_DIM}")
        if not np.all(np.isfinite(g)):
            raise FermiDynError("gram has non-finite entries")
        if not np.array_equal(g, g.T):
            raise NonSymmetric("gram matrix is not symmetric")
        try:
            chol = np.linalg.cholesky(g)
        except np.linalg.LinAlgError:
            raise NotPositiveDefinite("gram matrix is not positive-definite") from None
        if np.any(np.diag(chol) <= 0):
            raise NotPositiveDefinite("gram matrix is not positive-definite")
        g.setflags(write=False)
        chol.setflags(write=False)
        object.__setattr__(self, "gram", g)
        object.__setattr__(self, "_chol", chol)
        object.__setattr__(self, "is_diagonal", bool(np.count_nonzero(g - np.diag(np.diag(g))) == 0))
        object.__setattr__(self, "is_identity", bool(np.array_equal(g, np.eye(n))))

    @classmethod
    def identity(cls, n: int) -> "Metric":
        return cls(np.eye(n))

    @property
    def dim(self) -> int:
        return self.gram.shape[0]

    @property
    def cholesky(self) -> np.ndarray:
        """Lower-triangular ``L`` with ``gram = L @ L.T``."""
        return self._chol

    @property
    def inverse(self) -> np.ndarray:
        inv = self._cache.get("inverse")
        if inv is None:
            inv = np.linalg.inv(self.gram)
            inv.setflags(write=False)
            self._cache["inverse"] = inv
        return inv

    @property
    def det(self) -> float:
        return float(np.prod(np.diag(self._chol)) ** 2)

    def __call__(self, u, v) -> float:
        """``g(u, v)`` for coordinate arrays or grade-1 multivectors."""
        return float(as_coordinates(u, self.dim) @ self.gram @ as_coordinates(v, self.dim))

    def __repr__(self):
        if self.is_identity:
            return f"Metric.identity({self.dim})"
        return f"Metric({self.gram.tolist()!r})"


def make_metric(gram) -> Metric:
    return Metric(np.asarray(gram, dtype=float))


@dataclass(frozen=True, order=True)
class Blade:
    """Basis blade ``e{indices}``; indices are 1-based and strictly ascending."""

    indices: tuple[int, ...] = ()

    def __post_init__(self):
        idx = tuple(int(i) for i in self.indices)
        if any(i < 1 for i in idx):
            raise FermiDynError(f"blade indices are 1-based, got {idx}")
        if any(a >= b for a, b in zip(idx, idx[1:])):
            raise FermiDynError(f"blade indices must be strictly ascending, got {idx}")
        object.__setattr__(self, "indices", idx)

    @classmethod
    def from_mask(cls, mask: int) -> "Blade":
        return cls(tuple(i + 1 for i in bits(mask)))

    @property
    def mask(self) -> int:
        m = 0
        for i in self.indices:
            m |= 1 << (i - 1)
        return m

    @property
    def grade(self) -> int:
        return len(self.indices)

    def label(self, dim: int | None = None) -> str:
        """Column label such as ``e``, ``e1``, ``e13``; ``_``-separated when ``dim >= 10``."""
        if dim is not None and dim >= 10:
            return "e" + "_".join(str(i) for i in self.indices)
        return "e" + "".join(str(i) for i in self.indices)


def blade_sort_key(mask: int) -> tuple[int, tuple[int, ...]]:
    return grade_of(mask), tuple(bits(mask))


# ---------------------------------------------------------------------------
# multivectors

class Multivector:
    """Immutable element of the exterior algebra over an ``dim``-dimensional space."""

    __slots__ = ("dim", "_terms")

    def __init__(self, dim: int, terms: Mapping[int, float] | None = None):
        if not 1 <= dim <= MAX_DIM:
            if dim > MAX_DIM:
                raise DimTooLarge(f"dimension {dim} exceeds cap {MAX_DIM}")
            raise FermiDynError("dimension must be at least 1")
        top = 1 << dim
        clean = {}
        for mask, c in (terms or {}).items():
            if not 0 <= mask < top:
                raise DimMismatch(f"blade mask {mask:#b} outside dimension {dim}")
            c = float(c)
            if c != 0.0:
                clean[mask] = c
        object.__setattr__(self, "dim", dim)
        object.__setattr__(self, "_terms", clean)

    def __setattr__(self, name, value):
        raise AttributeError("Multivector is immutable")

    # constructors
    @classmethod
    def zero(cls, dim: int) -> "Multivector":
        return cls(dim)

    @classmethod
    def scalar(cls, dim: int, value: float = 1.0) -> "Multivector":
        return cls(dim, {0: value})

    @classmethod
    def basis(cls, dim: int, i: int) -> "Multivector":
        """Basis vector ``e_i`` (1-based)."""
        if not 1 <= i <= dim:
            raise DimMismatch(f"basis index {i} outside 1..{dim}")
        return cls(dim, {1 << (i - 1): 1.0})

    @classmethod
    def blade(cls, dim: int, indices: Sequence[int], coef: float = 1.0) -> "Multivector":
        b = Blade(tuple(indices))
        if b.indices and b.indices[-1] > dim:
            raise DimMismatch(f"blade {b.indices} outside dimension {dim}")
        return cls(dim, {b.mask: coef})

    @classmethod
    def from_terms(cls, dim: int, terms: Mapping[Sequence[int], float] | Iterable[tuple[Sequence[int], float]]) -> "Multivector":
        """Build from ``{(1, 2): c, ...}``; repeated blades are summed."""
        items = terms.items() if isinstance(terms, Mapping) else terms
        acc: dict[int, float] = {}
        for indices, c in items:
            b = Blade(tuple(indices))
            if b.indices and b.indices[-1] > dim:
                raise DimMismatch(f"blade {b.indices} outside dimension {dim}")
            acc[b.mask] = acc.get(b.mask, 0.0) + float(c)
        return cls(dim, acc)

    @classmethod
    def vector(cls, coords: Sequence[float]) -> "Multivector":
        coords = np.asarray(coords, dtype=float)
        return cls(len(coords), {1 << i: c for i, c in enumerate(coords)})

    @classmethod
    def from_array(cls, dim: int, arr: np.ndarray) -> "Multivector":
        """Inverse of :meth:`to_array`."""
        arr = np.asarray(arr, dtype=float)
        if arr.shape != (1 << dim,):
            raise DimMismatch(f"expected {1 << dim} coefficients, got {arr.shape}")
        nz = np.flatnonzero(arr)
        return cls(dim, {int(k): arr[k] for k in nz})

    # views
    @property
    def terms(self) -> Mapping[int, float]:
        return MappingProxyType(self._terms)

    def blades(self) -> list[tuple[Blade, float]]:
        """Terms as ``(Blade, coefficient)`` ordered by grade, then indices."""
        return [(Blade.from_mask(m), self._terms[m]) for m in sorted(self._terms, key=blade_sort_key)]

    def coefficient(self, indices: Sequence[int] = ()) -> float:
        return self._terms.get(Blade(tuple(indices)).mask, 0.0)

    def to_array(self) -> np.ndarray:
        out = np.zeros(1 << self.dim)
        for m, c in self._terms.items():
            out[m] = c
        return out

    def grades(self) -> set[int]:
        return {grade_of(m) for m in self._terms}

    def grade_part(self, p: int) -> "Multivector":
        return Multivector(self.dim, {m: c for m, c in self._terms.items() if grade_of(m) == p})

    @property
    def scalar_part(self) -> float:
        return self._terms.get(0, 0.0)

    def is_zero(self) -> bool:
        return not self._terms

    def norm_inf(self) -> float:
        return max((abs(c) for c in self._terms.values()), default=0.0)

    def __len__(self):
        return len(self._terms)

    def __iter__(self) -> Iterator[tuple[int, float]]:
        return iter(self._terms.items())

    # linear structure
    def _check(self, other: "Multivector"):
        if self.dim != other.dim:
            raise DimMismatch(f"dimensions differ: {self.dim} vs {other.dim}")

    def __add__(self, other):
        if isinstance(other, (int, float)):
            other = Multivector.scalar(self.dim, other)
        if not isinstance(other, Multivector):
            return NotImplemented
        self._check(other)
        acc = dict(self._terms)
        for m, c in other._terms.items():
            acc[m] = acc.get(m, 0.0) + c
        return Multivector(self.dim, acc)

    __radd__ = __add__

    def __neg__(self):
        return Multivector(self.dim, {m: -c for m, c in self._terms.items()})

    def __sub__(self, other):
        if isinstance(other, (int, float)):
            other = Multivector.scalar(self.dim, other)
        if not isinstance(other, Multivector):
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, k):
        if isinstance(k, (int, float, np.floating, np.integer)):
            k = float(k)
            return Multivector(self.dim, {m: c * k for m, c in self._terms.items()})
        return NotImplemented

    __rmul__ = __mul__

    def __truediv__(self, k):
        if isinstance(k, (int, float, np.floating, np.integer)):
            return self * (1.0 / float(k))
        return NotImplemented

    def __xor__(self, other):
        if not isinstance(other, Multivector):
            return NotImplemented
        return wedge(self, other)

    def __eq__(self, other):
        if not isinstance(other, Multivector):
            return NotImplemented
        return self.dim == other.dim and self._terms == other._terms

    def __hash__(self):
        return hash((self.dim, frozenset(self._terms.items())))

    def __repr__(self):
        if not self._terms:
            return f"Multivector({self.dim}, 0)"
        body = " + ".join(f"{c!r}*{b.label(self.dim)}" for b, c in self.blades())
        return f"Multivector({self.dim}, {body})"


def as_coordinates(v, dim: int | None = None) -> np.ndarray:
    """Coordinates of a phase-space vector given as array or grade-1 multivector."""
    if isinstance(v, Multivector):
        if v.grades() - {1}:
            raise NotAVector(f"expected a grade-1 element, got grades {sorted(v.grades())}")
        out = np.zeros(v.dim)
        for m, c in v:
            out[m.bit_length() - 1] = c
        v_dim, arr = v.dim, out
    else:
        arr = np.asarray(v, dtype=float)
        if arr.ndim != 1:
            raise NotAVector(f"expected a 1-d coordinate array, got shape {arr.shape}")
        v_dim = arr.shape[0]
    if dim is not None and v_dim != dim:
        raise DimMismatch(f"vector of dimension {v_dim}, expected {dim}")
    return arr


def _same_dim(*items) -> int:
    dims = {x.dim for x in items}
    if len(dims) != 1:
        raise DimMismatch(f"dimensions differ: {sorted(dims)}")
    return dims.pop()


def _accumulate(dim: int, acc: dict[int, float]) -> Multivector:
    return Multivector(dim, acc)


# ---------------------------------------------------------------------------
# classical products

def wedge(A: Multivector, B: Multivector) -> Multivector:
    """Exterior product ``A ^ B``."""
    dim = _same_dim(A, B)
    acc: dict[int, float] = {}
    for a, ca in A:
        for b, cb in B:
            if a & b:
                continue
            m = a | b
            acc[m] = acc.get(m, 0.0) + reorder_sign(a, b) * ca * cb
    return _accumulate(dim, acc)


def _drop_one(mask: int) -> list[tuple[int, int, int]]:
    """``(index, position, rest)`` for each set bit of ``mask``; position is 0-based."""
    return [(i, k, mask & ~(1 << i)) for k, i in enumerate(bits(mask))]


def _bracket_blades(a: int, b: int, m: Metric) -> dict[int, float]:
    """Single-contraction sum ``sum g(last of a, first of b) * rest_a ^ rest_b``.

    The contracted index of ``a`` is moved to the end of ``a`` and the one of
    ``b`` to the front of ``b`` before contracting.
    """
    key = ("contract1", a, b)
    hit = m._cache.get(key)
    if hit is not None:
        return hit
    g = m.gram
    p = grade_of(a)
    out: dict[int, float] = {}
    right = _drop_one(b)
    for i, k, ra in _drop_one(a):
        sa = -1 if (p - 1 - k) & 1 else 1
        for j, l, rb in right:
            gij = g[i, j]
            if gij == 0.0 or ra & rb:
                continue
            sb = -1 if l & 1 else 1
            mm = ra | rb
            out[mm] = out.get(mm, 0.0) + sa * sb * reorder_sign(ra, rb) * gij
    m._cache[key] = out
    return out


def single_contraction(A: Multivector, B: Multivector, m: Metric, scale: float = 1.0) -> Multivector:
    """Sum over all single contractions between a vector factor of ``A`` and one of ``B``.

    This is the first-order term in the metric scale of the Clifford product.
    """
    dim = _same_dim(A, B)
    if dim != m.dim:
        raise DimMismatch(f"multivector dimension {dim} vs metric {m.dim}")
    acc: dict[int, float] = {}
    for a, ca in A:
        if not a:
            continue
        for b, cb in B:
            if not b:
                continue
            w = scale * ca * cb
            for mm, c in _bracket_blades(a, b, m).items():
                acc[mm] = acc.get(mm, 0.0) + w * c
    return _accumulate(dim, acc)


def literal_bracket_factor(p: int, q: int) -> float:
    """Ratio of the ``2pq``-prefactored index formula to the derivation bracket."""
    if p == 0 or q == 0:
        return 0.0
    return math.factorial(p) * math.factorial(q) / math.factorial(p + q - 2)


def casalbuoni_bracket(A: Multivector, B: Multivector, m: Metric,
                       convention: BracketConvention = "derivation") -> Multivector:
    """Fermionic Poisson bracket ``{A, B}``.

    ``convention="derivation"`` (default) is the graded bracket
    ``{w, a} = 2 g_ab (w^{...a}) ^ (a^{b...})``: it is graded antisymmetric,
    a graded derivation, satisfies the graded Jacobi identity and equals twice
    the first-order deformation of the Clifford product.

    ``convention="literal"`` evaluates ``2pq g_ab w^{[c..|a} a^{b|d..]}`` with a
    unit-normalised antisymmetriser.  Per grade pair it is
    ``p! q! / (p+q-2)!`` times the derivation bracket: equal for two vectors,
    twice it whenever one argument is a 2-form, and not a derivation in
    general.
    """
    if convention == "derivation":
        return single_contraction(A, B, m, scale=2.0)
    if convention != "literal":
        raise ValueError(f"unknown bracket convention {convention!r}")
    dim = _same_dim(A, B)
    out = Multivector.zero(dim)
    for p in sorted(A.grades()):
        Ap = A.grade_part(p)
        for q in sorted(B.grades()):
            f = literal_bracket_factor(p, q)
            if f:
                out = out + single_contraction(Ap, B.grade_part(q), m, scale=2.0 * f)
    return out


def _minor_dets(G: np.ndarray, rows: Sequence[int], cols_list: Sequence[Sequence[int]]) -> np.ndarray:
    sub = np.stack([G[np.ix_(rows, cols)] for cols in cols_list])
    return np.linalg.det(sub)


def _blade_inner(a: int, b: int, m: Metric) -> float:
    if m.is_diagonal:
        if a != b:
            return 0.0
        return float(np.prod(np.diag(m.gram)[bits(a)])) if a else 1.0
    if not a:
        return 1.0
    key = ("inner", a, b) if a <= b else ("inner", b, a)
    hit = m._cache.get(key)
    if hit is None:
        hit = float(np.linalg.det(m.gram[np.ix_(bits(a), bits(b))]))
        m._cache[key] = hit
    return hit


def extended_inner(A: Multivector, B: Multivector, m: Metric) -> float:
    """Inner product on the exterior algebra induced by ``g``.

    Blades of different grade are orthogonal; for equal grades
    ``<e_I, e_J>`` is the determinant of the Gram submatrix ``g(e_i, e_j)``.
    """
    dim = _same_dim(A, B)
    if dim != m.dim:
        raise DimMismatch(f"multivector dimension {dim} vs metric {m.dim}")
    total = 0.0
    if m.is_diagonal:
        for a, ca in A:
            cb = B._terms.get(a)
            if cb is not None:
                total += ca * cb * _blade_inner(a, a, m)
        return total
    by_grade: dict[int, list[tuple[int, float]]] = {}
    for b, cb in B:
        by_grade.setdefault(grade_of(b), []).append((b, cb))
    for a, ca in A:
        for b, cb in by_grade.get(grade_of(a), ()):
            total += ca * cb * _blade_inner(a, b, m)
    return total


def epsilon(m: Metric) -> Multivector:
    """Positively oriented unit volume element: ``e{1..n} / sqrt(det g)``."""
    n = m.dim
    return Multivector(n, {(1 << n) - 1: 1.0 / math.sqrt(m.det)})


def scalar_functional(A: Multivector) -> float:
    """``i(A) = <1, A>``, the scalar part."""
    return A.scalar_part


def integral(A: Multivector, m: Metric) -> float:
    """``<epsilon, A>``."""
    return extended_inner(epsilon(m), A, m)


def distinguished_functionals(A: Multivector, m: Metric) -> tuple[float, float]:
    if A.dim != m.dim:
        raise DimMismatch(f"multivector dimension {A.dim} vs metric {m.dim}")
    return scalar_functional(A), integral(A, m)


def derivative(A: Multivector, m: Metric) -> tuple[Multivector, ...]:
    """``(grad_1 A, ..., grad_n A)`` with ``(grad_a w)^{b...} = g_ac w^{cb...}``.

    Entry ``a-1`` of the result is the slot-``a`` component.
    """
    if A.dim != m.dim:
        raise DimMismatch(f"multivector dimension {A.dim} vs metric {m.dim}")
    n = m.dim
    g = m.gram
    accs: list[dict[int, float]] = [{} for _ in range(n)]
    for mask, c in A:
        for i, k, rest in _drop_one(mask):
            s = -c if k & 1 else c
            for a in range(n):
                gai = g[a, i]
                if gai != 0.0:
                    acc = accs[a]
                    acc[rest] = acc.get(rest, 0.0) + gai * s
    return tuple(Multivector(n, acc) for acc in accs)


def dagger_sign(p: int) -> int:
    return -1 if (p * (p - 1) // 2) & 1 else 1


def dagger(A: Multivector) -> Multivector:
    """Reversion: ``w -> (-1)^{p(p-1)/2} w`` on ``p``-forms."""
    return Multivector(A.dim, {m: dagger_sign(grade_of(m)) * c for m, c in A})


# ---------------------------------------------------------------------------
# linear maps on phase space

@dataclass(frozen=True, eq=False)
class LinearMap:
    """Linear map on phase space, ``(M eta)^a = matrix[a][b] eta^b``."""

    matrix: np.ndarray
    metric: Metric

    def __post_init__(self):
        M = np.array(self.matrix, dtype=float)
        n = self.metric.dim
        if M.shape != (n, n):
            raise DimMismatch(f"matrix shape {M.shape} does not match dimension {n}")
        if not np.all(np.isfinite(M)):
            raise FermiDynError("linear map has non-finite entries")
        M.setflags(write=False)
        object.__setattr__(self, "matrix", M)

    @property
    def dim(self) -> int:
        return self.metric.dim

    def adjoint_matrix(self) -> np.ndarray:
        """Adjoint with respect to ``g``: ``G^{-1} M^T G``."""
        G = self.metric.gram
        return np.linalg.solve(G, self.matrix.T @ G)

    def __call__(self, v):
        x = self.matrix @ as_coordinates(v, self.dim)
        return Multivector.vector(x) if isinstance(v, Multivector) else x


class Generator(LinearMap):
    """Anti-hermitian linear map: ``H^dagger = -H`` within ``1e-10`` (relative)."""

    def __post_init__(self):
        super().__post_init__()
        H = self.matrix
        scale = max(1.0, float(np.max(np.abs(H))))
        err = float(np.max(np.abs(self.adjoint_matrix() + H)))
        if err > MAP_TOL * scale:
            raise NotAntiHermitian(f"generator fails H^dagger = -H by {err:.3e}")


class OrthogonalMap(LinearMap):
    """Map preserving ``g``: ``U^T G U = G`` within ``1e-10`` (relative to ``G``)."""

    def __post_init__(self):
        super().__post_init__()
        err = orthogonality_defect(self.matrix, self.metric)
        if err > MAP_TOL * max(1.0, float(np.max(np.abs(self.metric.gram)))):
            raise NotOrthogonal(f"map fails U^T G U = G by {err:.3e}")


def orthogonality_defect(U: np.ndarray, m: Metric) -> float:
    G = m.gram
    return float(np.max(np.abs(U.T @ G @ U - G)))


def two_form_of(H: Generator) -> Multivector:
    """2-form ``H^{ab} = H^a_c g^{cb}`` of a generator."""
    if not isinstance(H, Generator):
        raise NotAntiHermitian("expected a Generator")
    K = H.matrix @ H.metric.inverse
    n = H.dim
    terms = {}
    for i, j in itertools.combinations(range(n), 2):
        terms[(1 << i) | (1 << j)] = 0.5 * (K[i, j] - K[j, i])
    return Multivector(n, terms)


def generator_of(form: Multivector, m: Metric) -> Generator:
    """Inverse of :func:`two_form_of`."""
    if form.dim != m.dim:
        raise DimMismatch(f"form dimension {form.dim} vs metric {m.dim}")
    if form.grades() - {2}:
        raise NotTwoForm(f"expected a pure 2-form, got grades {sorted(form.grades())}")
    n = m.dim
    K = np.zeros((n, n))
    for mask, c in form:
        i, j = bits(mask)
        K[i, j] = c
        K[j, i] = -c
    return Generator(K @ m.gram, m)


def generator_two_form_iso(direction: Literal["to_form", "to_map"], X, m: Metric):
    if direction == "to_form":
        if not isinstance(X, Generator):
            raise NotAntiHermitian("to_form expects a Generator")
        if X.metric is not m and not np.array_equal(X.metric.gram, m.gram):
            raise DimMismatch("generator metric differs from the given metric")
        return two_form_of(X)
    if direction == "to_map":
        if not isinstance(X, Multivector):
            raise NotTwoForm("to_map expects a Multivector")
        return generator_of(X, m)
    raise ValueError(f"unknown direction {direction!r}")


def apply_orthogonal(U: LinearMap, A: Multivector) -> Multivector:
    """Induced action ``U(w) = U..U w`` on the exterior algebra.

    ``U e_I = sum_J det(U[J, I]) e_J``.
    """
    n = U.dim
    if A.dim != n:
        raise DimMismatch(f"multivector dimension {A.dim} vs map {n}")
    M = U.matrix
    acc: dict[int, float] = {}
    for mask, c in A:
        cols = bits(mask)
        p = len(cols)
        if p == 0:
            acc[0] = acc.get(0, 0.0) + c
            continue
        rows_list = list(itertools.combinations(range(n), p))
        dets = np.linalg.det(np.stack([M[np.ix_(rows, cols)] for rows in rows_list]))
        for rows, d in zip(rows_list, dets):
            if d != 0.0:
                mm = sum(1 << r for r in rows)
                acc[mm] = acc.get(mm, 0.0) + c * float(d)
    return Multivector(n, acc)
