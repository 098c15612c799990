"""Randomised residual checks of the bracket, involution and deformation identities."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .algebra import (
    Metric,
    Multivector,
    casalbuoni_bracket,
    dagger,
    extended_inner,
    scalar_functional,
    wedge,
)
from .clifford import clifford_product
from .sampling import random_form, random_multivector, rng_from_seed

BRACKET_IDENTITIES = ("bracket_unit", "bracket_antisymmetry", "bracket_leibniz", "bracket_jacobi")
DAGGER_IDENTITIES = ("dagger_antiautomorphism", "dagger_inner_scalar", "dagger_inner_adjoint", "dagger_inner_invariance")
DEFORMATION_IDENTITIES = ("deformation_wedge_limit", "deformation_first_order")


@dataclass
class IdentityReport:
    dim: int
    trials: int
    residuals: dict[str, float] = field(default_factory=dict)

    def update(self, name: str, value: float):
        self.residuals[name] = max(self.residuals.get(name, 0.0), float(value))

    def failures(self, tol: float) -> list[str]:
        return [k for k, v in self.residuals.items() if not v <= tol]

    def passed(self, tol: float) -> bool:
        return not self.failures(tol)

    def lines(self, tol: float) -> list[str]:
        out = []
        for name, v in self.residuals.items():
            out.append(f"{name:28s} {v:.3e}  {'ok' if v <= tol else 'FAIL'}")
        return out


def bracket_residuals(w: Multivector, a: Multivector, b: Multivector, m: Metric,
                      p: int, q: int, r: int) -> dict[str, float]:
    """Residuals of the four bracket identities for forms of grades ``p, q, r``."""

    def br(x, y):
        return casalbuoni_bracket(x, y, m)

    one = Multivector.scalar(m.dim)
    unit = br(one, a).norm_inf()
    anti = (br(a, w) - (-1) ** (p * q + 1) * br(w, a)).norm_inf()
    leib = (br(w, wedge(a, b)) - wedge(br(w, a), b) - (-1) ** (p * q) * wedge(a, br(w, b))).norm_inf()
    jac = ((-1) ** (p * r) * br(w, br(a, b))
           + (-1) ** (q * p) * br(a, br(b, w))
           + (-1) ** (r * q) * br(b, br(w, a))).norm_inf()
    return {"bracket_unit": unit, "bracket_antisymmetry": anti,
            "bracket_leibniz": leib, "bracket_jacobi": jac}


def dagger_residuals(A: Multivector, B: Multivector, C: Multivector, m: Metric) -> dict[str, float]:
    """Residuals of the four involution identities at ``hbar = 1``."""

    def cp(x, y):
        return clifford_product(x, y, m)

    anti = (dagger(cp(A, B)) - cp(dagger(B), dagger(A))).norm_inf()
    scal = abs(extended_inner(A, B, m) - scalar_functional(cp(dagger(A), B)))
    adj = abs(extended_inner(A, cp(B, C), m) - extended_inner(cp(dagger(B), A), C, m))
    inv = abs(extended_inner(A, B, m) - extended_inner(dagger(A), dagger(B), m))
    return {"dagger_antiautomorphism": anti, "dagger_inner_scalar": scal,
            "dagger_inner_adjoint": adj, "dagger_inner_invariance": inv}


def hbar_coefficients(A: Multivector, B: Multivector, m: Metric, degree: int) -> list[np.ndarray]:
    """Coefficients of ``AB`` as a polynomial in ``hbar`` from ``degree + 1`` samples.

    Returns coefficient arrays (``to_array`` layout) for ``hbar^0 .. hbar^degree``.
    """
    nodes = 0.5 * (1 - np.cos(np.pi * (np.arange(degree + 1) + 0.5) / (degree + 1)))
    samples = np.stack([clifford_product(A, B, m, h).to_array() for h in nodes])
    V = np.vander(nodes, degree + 1, increasing=True)
    coeffs = np.linalg.solve(V, samples)
    return list(coeffs)


def deformation_residuals(A: Multivector, B: Multivector, m: Metric) -> dict[str, float]:
    """Checks ``AB|0 = A ^ B`` exactly and ``d/dhbar AB|0 = 1/2 {A, B}`` via a polynomial fit."""
    exact = (clifford_product(A, B, m, 0.0) - wedge(A, B)).norm_inf()
    degree = min(max(A.grades(), default=0), max(B.grades(), default=0))
    if degree == 0:
        first = casalbuoni_bracket(A, B, m).norm_inf()
    else:
        coeffs = hbar_coefficients(A, B, m, degree)
        half = 0.5 * casalbuoni_bracket(A, B, m).to_array()
        zeroth = float(np.max(np.abs(coeffs[0] - wedge(A, B).to_array())))
        exact = max(exact, zeroth)
        first = float(np.max(np.abs(coeffs[1] - half)))
    return {"deformation_wedge_limit": exact, "deformation_first_order": first}


def run_identity_suite(dim: int, metric: Metric | None = None, trials: int = 200,
                       seed: int | None = 0, deformation: bool = True) -> IdentityReport:
    """Maximum residual of every identity over ``trials`` seeded random draws."""
    m = metric if metric is not None else Metric.identity(dim)
    rng = rng_from_seed(seed)
    report = IdentityReport(dim=dim, trials=trials)
    for name in BRACKET_IDENTITIES + DAGGER_IDENTITIES + (DEFORMATION_IDENTITIES if deformation else ()):
        report.residuals[name] = 0.0
    for _ in range(trials):
        p, q, r = (int(x) for x in rng.integers(0, dim + 1, size=3))
        w, a, b = random_form(rng, dim, p), random_form(rng, dim, q), random_form(rng, dim, r)
        for k, v in bracket_residuals(w, a, b, m, p, q, r).items():
            report.update(k, v)
        A, B, C = (random_multivector(rng, dim) for _ in range(3))
        for k, v in dagger_residuals(A, B, C, m).items():
            report.update(k, v)
        if deformation:
            for k, v in deformation_residuals(w, a, m).items():
                report.update(k, v)
    return report
