"""CSV writers: header row, 17 significant digits, LF line endings."""

from __future__ import annotations

import io
import math
from typing import Sequence

from .algebra import Blade, Metric, Multivector, blade_sort_key, distinguished_functionals, extended_inner


def fmt(x: float) -> str:
    return format(float(x) + 0.0, ".17g")


def _render(header: Sequence[str], rows: Sequence[Sequence[float]]) -> str:
    buf = io.StringIO()
    buf.write(",".join(header) + "\n")
    for row in rows:
        buf.write(",".join(fmt(x) for x in row) + "\n")
    return buf.getvalue()


def trajectory_csv(traj: Sequence[tuple[float, Multivector]], m: Metric) -> str:
    """``t``, one column per blade seen anywhere on the trajectory, then ``norm, i, int``."""
    masks = sorted({mask for _, A in traj for mask in A.terms}, key=blade_sort_key)
    header = ["t"] + [Blade.from_mask(k).label(m.dim) for k in masks] + ["norm", "i", "int"]
    rows = []
    for t, A in traj:
        i_val, int_val = distinguished_functionals(A, m)
        norm = math.sqrt(max(extended_inner(A, A, m), 0.0))
        rows.append([t] + [A.terms.get(k, 0.0) for k in masks] + [norm, i_val, int_val])
    return _render(header, rows)


def deform_csv(rows: Sequence[tuple[float, float, float]]) -> str:
    return _render(["hbar", "clifford_minus_wedge", "first_order_residual"], rows)
