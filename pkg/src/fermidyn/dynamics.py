"""Phase-space and observable dynamics.

Classical: ``d eta/dt = H eta`` on phase space, and ``dA/dt = 1/4 {H, A}``
on observables with ``H`` read as a 2-form.  Quantum: ``dA/dt = 1/4 [H, A]``
with the Clifford commutator, where ``H`` may be any anti-hermitian element
(grades 2 and 3 mod 4), including higher-degree interaction terms.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Literal

import numpy as np
import scipy.linalg
import scipy.sparse

from .algebra import (
    MAP_TOL,
    Generator,
    Metric,
    Multivector,
    OrthogonalMap,
    as_coordinates,
    casalbuoni_bracket,
    dagger,
    generator_of,
    two_form_of,
)
from .clifford import clifford_commutator
from .errors import DimMismatch, FermiDynError, ModeMismatch, NotAntiHermitian, NotAVector, NotTwoForm

Mode = Literal["classical", "quantum"]
RateConvention = Literal["paper", "classical_match"]

# RK4 substep bound: h * ||L||_1 stays below this when substeps are automatic
AUTO_STEP = 0.005


def evolution_operator(H: Generator, t: float) -> OrthogonalMap:
    """``exp(t H)`` as an orthogonal map.

    With ``G = L L^T`` the generator is similar to the antisymmetric matrix
    ``S = L^T H L^{-T}``; its exponential is formed by scaling and squaring
    and mapped back, which keeps ``U^T G U = G`` at rounding level.
    """
    if not isinstance(H, Generator):
        raise NotAntiHermitian("evolution_operator expects a Generator")
    t = float(t)
    if not math.isfinite(t):
        raise FermiDynError("time must be finite")
    L = H.metric.cholesky
    S = L.T @ scipy.linalg.solve_triangular(L, H.matrix.T, lower=True).T
    S = 0.5 * (S - S.T)
    E = scipy.linalg.expm(t * S)
    U = scipy.linalg.solve_triangular(L.T, E @ L.T, lower=False)
    return OrthogonalMap(U, H.metric)


@dataclass(frozen=True, eq=False)
class EvolutionSpec:
    """Inputs of one evolution run.

    ``hamiltonian`` is a :class:`Generator` or a 2-form in classical mode, and
    an anti-hermitian multivector (or a Generator, used through its 2-form) in
    quantum mode.  ``substeps`` is the number of RK4 steps per output
    interval; ``None`` picks enough to keep ``h * ||L||_1 <= 0.005``.
    """

    metric: Metric
    hamiltonian: Generator | Multivector
    initial: Multivector | np.ndarray
    t0: float = 0.0
    t1: float = 1.0
    steps: int = 100
    mode: Mode = "classical"
    rate_convention: RateConvention = "paper"
    substeps: int | None = None

    def __post_init__(self):
        if not self.t1 > self.t0:
            raise FermiDynError(f"need t1 > t0, got [{self.t0}, {self.t1}]")
        if int(self.steps) < 1 or int(self.steps) != self.steps:
            raise FermiDynError(f"steps must be a positive integer, got {self.steps}")
        if self.substeps is not None and int(self.substeps) < 1:
            raise FermiDynError(f"substeps must be positive, got {self.substeps}")
        if self.mode not in ("classical", "quantum"):
            raise FermiDynError(f"unknown mode {self.mode!r}")
        if self.rate_convention not in ("paper", "classical_match"):
            raise FermiDynError(f"unknown rate convention {self.rate_convention!r}")
        H = self.hamiltonian
        n = self.metric.dim
        if H.dim != n:
            raise DimMismatch(f"hamiltonian dimension {H.dim} vs metric {n}")
        if self.mode == "classical" and isinstance(H, Multivector):
            try:
                H = generator_of(H, self.metric)
            except NotTwoForm as exc:
                raise ModeMismatch(f"classical hamiltonians are 2-forms: {exc}") from None
        elif self.mode == "quantum":
            if isinstance(H, Generator):
                H = two_form_of(H)
            defect = (dagger(H) + H).norm_inf()
            if defect > MAP_TOL * max(1.0, H.norm_inf()):
                raise NotAntiHermitian(f"quantum hamiltonian fails H^dagger = -H by {defect:.3e}")
        object.__setattr__(self, "hamiltonian", H)
        init = self.initial
        if isinstance(init, Multivector):
            if init.dim != n:
                raise DimMismatch(f"initial dimension {init.dim} vs metric {n}")
        else:
            init = np.asarray(init, dtype=float)
            if init.shape != (n,):
                raise NotAVector(f"initial array of shape {init.shape}, expected ({n},)")
            object.__setattr__(self, "initial", init)

    @property
    def times(self) -> np.ndarray:
        return np.linspace(self.t0, self.t1, self.steps + 1)

    @property
    def generator(self) -> Generator:
        if self.mode != "classical":
            raise ModeMismatch("phase-space generator only exists in classical mode")
        return self.hamiltonian

    @property
    def hamiltonian_form(self) -> Multivector:
        H = self.hamiltonian
        return two_form_of(H) if isinstance(H, Generator) else H


def evolve_phase(spec: EvolutionSpec) -> list[tuple[float, np.ndarray | Multivector]]:
    """``eta(t_k) = exp((t_k - t0) H) eta0`` on the output grid."""
    if spec.mode != "classical":
        raise ModeMismatch("phase-space evolution requires classical mode")
    as_mv = isinstance(spec.initial, Multivector)
    eta0 = as_coordinates(spec.initial, spec.metric.dim)
    out = []
    for t in spec.times:
        eta = evolution_operator(spec.generator, t - spec.t0).matrix @ eta0
        out.append((float(t), Multivector.vector(eta) if as_mv else eta))
    return out


def observable_rhs(spec: EvolutionSpec) -> Callable[[Multivector], Multivector]:
    """Right-hand side ``A -> dA/dt`` for the observable ODE of ``spec``.

    Classical mode evaluates ``1/4 {H, A}`` with the ``2pq`` index formula,
    which for a 2-form ``H`` is twice the derivation bracket and reproduces
    ``d eta/dt = H eta`` on vectors.  Quantum mode evaluates ``1/4 [H, A]``,
    doubled under ``classical_match``.
    """
    m = spec.metric
    H = spec.hamiltonian_form
    if spec.mode == "classical":
        return lambda A: 0.25 * casalbuoni_bracket(H, A, m, convention="literal")
    rate = 0.25 if spec.rate_convention == "paper" else 0.5
    return lambda A: rate * clifford_commutator(H, A, m)


def rhs_operator(spec: EvolutionSpec, support: set[int] | None = None) -> tuple[list[int], scipy.sparse.csr_matrix]:
    """Sparse matrix of the observable ODE on the blades reachable from ``support``.

    Returns the blade masks indexing the rows/columns and the matrix.
    """
    if support is None:
        if not isinstance(spec.initial, Multivector):
            raise NotAVector("observable evolution needs a Multivector initial value")
        support = set(spec.initial.terms)
    rhs = observable_rhs(spec)
    n = spec.metric.dim
    index: dict[int, int] = {}
    order: list[int] = []
    columns: dict[int, Multivector] = {}
    for mask in sorted(support):
        index[mask] = len(order)
        order.append(mask)
    i = 0
    while i < len(order):
        mask = order[i]
        col = rhs(Multivector(n, {mask: 1.0}))
        columns[mask] = col
        for mm in sorted(col.terms):
            if mm not in index:
                index[mm] = len(order)
                order.append(mm)
        i += 1
    rows, cols, vals = [], [], []
    for mask, col in columns.items():
        for mm, c in col:
            rows.append(index[mm])
            cols.append(index[mask])
            vals.append(c)
    size = len(order)
    L = scipy.sparse.csr_matrix((vals, (rows, cols)), shape=(size, size))
    return order, L


def _rk4(L, x: np.ndarray, h: float, nsteps: int) -> np.ndarray:
    for _ in range(nsteps):
        k1 = L @ x
        k2 = L @ (x + 0.5 * h * k1)
        k3 = L @ (x + 0.5 * h * k2)
        k4 = L @ (x + h * k3)
        x = x + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
    return x


def auto_substeps(spec: EvolutionSpec, L) -> int:
    norm = float(abs(L).sum(axis=0).max()) if L.nnz else 0.0
    h = (spec.t1 - spec.t0) / spec.steps
    return max(1, math.ceil(h * norm / AUTO_STEP))


def evolve_observable(spec: EvolutionSpec) -> list[tuple[float, Multivector]]:
    """Fixed-step RK4 integration of the observable ODE on coefficient vectors."""
    A0 = spec.initial
    if not isinstance(A0, Multivector):
        A0 = Multivector.vector(A0)
    n = spec.metric.dim
    order, L = rhs_operator(spec, set(A0.terms))
    x = np.array([A0.terms.get(mask, 0.0) for mask in order])
    sub = spec.substeps or auto_substeps(spec, L)
    times = spec.times
    h = (spec.t1 - spec.t0) / spec.steps / sub

    def to_mv(vec):
        return Multivector(n, dict(zip(order, vec)))

    out = [(float(times[0]), to_mv(x))]
    for t in times[1:]:
        x = _rk4(L, x, h, sub)
        out.append((float(t), to_mv(x)))
    return out


def noether_drift(H: Generator, G: Generator, t1: float, steps: int = 1000) -> float:
    """Integrate ``dG/dt = HG - GH`` from ``G(0) = G`` and return ``max_t ||G(t) - G||_inf``."""
    if not isinstance(H, Generator) or not isinstance(G, Generator):
        raise NotAntiHermitian("noether_drift expects Generators")
    if H.metric is not G.metric and not np.array_equal(H.metric.gram, G.metric.gram):
        raise DimMismatch("generators live on different metrics")
    Hm = H.matrix
    G0 = G.matrix.copy()
    X = G0.copy()
    h = float(t1) / steps

    def f(Y):
        return Hm @ Y - Y @ Hm

    drift = 0.0
    for _ in range(steps):
        k1 = f(X)
        k2 = f(X + 0.5 * h * k1)
        k3 = f(X + 0.5 * h * k2)
        k4 = f(X + h * k3)
        X = X + (h / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)
        drift = max(drift, float(np.max(np.abs(X - G0))))
    return drift
