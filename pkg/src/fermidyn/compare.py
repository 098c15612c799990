"""Blade engine versus dense oracle sweeps."""

from __future__ import annotations

from dataclasses import dataclass, field

from .algebra import Metric, Multivector, Blade, casalbuoni_bracket, derivative, extended_inner, wedge
from .clifford import clifford_product, wick_product
from .oracle import oracle_multivector
from .sampling import random_multivector, rng_from_seed

KINDS = ("wedge", "bracket", "clifford", "inner")


def deviation(kind: str, A: Multivector, B: Multivector, m: Metric) -> float:
    """``||engine - oracle||_inf`` for one operation."""
    if kind == "wedge":
        return (wedge(A, B) - oracle_multivector("wedge", A, B, m)).norm_inf()
    if kind == "bracket":
        return (casalbuoni_bracket(A, B, m) - oracle_multivector("bracket", A, B, m)).norm_inf()
    if kind == "bracket_literal":
        return (casalbuoni_bracket(A, B, m, convention="literal")
                - oracle_multivector("bracket", A, B, m, convention="literal")).norm_inf()
    if kind == "clifford":
        return (clifford_product(A, B, m) - oracle_multivector("clifford", A, B, m)).norm_inf()
    if kind == "inner":
        return abs(extended_inner(A, B, m) - oracle_multivector("inner", A, B, m))
    if kind == "derivative":
        ours = derivative(A, m)
        ref = oracle_multivector("derivative", A, None, m)
        return max(((x - y).norm_inf() for x, y in zip(ours, ref)), default=0.0)
    raise ValueError(f"unknown kind {kind!r}")


@dataclass
class SweepResult:
    worst: dict[str, float] = field(default_factory=dict)
    worst_pair: dict[str, tuple] = field(default_factory=dict)
    count: int = 0

    def record(self, kind: str, value: float, pair: tuple):
        if kind not in self.worst or value > self.worst[kind]:
            self.worst[kind] = value
            self.worst_pair[kind] = pair

    @property
    def max_deviation(self) -> float:
        return max(self.worst.values(), default=0.0)


def exhaustive_sweep(dim: int, m: Metric, kinds=KINDS) -> SweepResult:
    """Every ordered pair of basis blades, every kind."""
    res = SweepResult()
    for a in range(1 << dim):
        A = Multivector(dim, {a: 1.0})
        for b in range(1 << dim):
            B = Multivector(dim, {b: 1.0})
            pair = (Blade.from_mask(a).label(), Blade.from_mask(b).label())
            for kind in kinds:
                res.record(kind, deviation(kind, A, B, m), pair)
            res.count += 1
    return res


def random_sweep(dim: int, m: Metric, pairs: int, seed: int = 0, kinds=KINDS) -> SweepResult:
    rng = rng_from_seed(seed)
    res = SweepResult()
    for k in range(pairs):
        A, B = random_multivector(rng, dim), random_multivector(rng, dim)
        for kind in kinds:
            res.record(kind, deviation(kind, A, B, m), ("random", k))
        res.count += 1
    return res


def wick_consistency(dim: int, m: Metric, pairs: int, seed: int = 0) -> float:
    """Max ``||recursive - pairing enumeration||_inf`` over random pairs."""
    rng = rng_from_seed(seed)
    worst = 0.0
    for _ in range(pairs):
        A, B = random_multivector(rng, dim), random_multivector(rng, dim)
        worst = max(worst, (clifford_product(A, B, m) - wick_product(A, B, m)).norm_inf())
    return worst
