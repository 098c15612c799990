"""Line-oriented experiment config files.

Example::

    dim 2
    metric identity
    mode classical
    rate paper
    time 0 6.283185307179586 8
    hamiltonian
    2 1 2 -1        # grade, ascending indices, coefficient
    end
    observable
    1 1 1
    end

``metric rows`` is followed by ``dim`` lines of ``dim`` numbers.  ``#``
starts a comment.  Repeated blades inside a block are summed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .algebra import Metric, Multivector
from .dynamics import EvolutionSpec
from .errors import ConfigError, FermiDynError

Terms = dict[tuple[int, ...], float]

_RATES = {"paper": "paper", "matched": "classical_match"}


@dataclass
class ExperimentConfig:
    dim: int
    metric_rows: tuple[tuple[float, ...], ...] | None = None  # None means identity
    mode: str = "classical"
    rate: str = "paper"
    hamiltonian: Terms = field(default_factory=dict)
    observables: list[Terms] = field(default_factory=list)
    t0: float = 0.0
    t1: float = 1.0
    steps: int = 100
    hbar: float = 1.0
    seed: int = 0

    # -- conversions
    def metric(self) -> Metric:
        if self.metric_rows is None:
            return Metric.identity(self.dim)
        return Metric(np.array(self.metric_rows, dtype=float))

    def hamiltonian_mv(self) -> Multivector:
        return Multivector.from_terms(self.dim, self.hamiltonian)

    def observable_mvs(self) -> list[Multivector]:
        return [Multivector.from_terms(self.dim, t) for t in self.observables]

    def evolution_spec(self, metric: Metric | None = None) -> EvolutionSpec:
        if not self.observables:
            raise ConfigError("config has no observable block")
        return EvolutionSpec(
            metric=metric or self.metric(),
            hamiltonian=self.hamiltonian_mv(),
            initial=self.observable_mvs()[0],
            t0=self.t0,
            t1=self.t1,
            steps=self.steps,
            mode=self.mode,
            rate_convention=_RATES[self.rate],
        )


def _num(tok: str, lineno: int) -> float:
    try:
        x = float(tok)
    except ValueError:
        raise ConfigError(f"expected a number, got {tok!r}", lineno) from None
    if not math.isfinite(x):
        raise ConfigError(f"non-finite number {tok!r}", lineno)
    return x


def _int(tok: str, lineno: int) -> int:
    try:
        return int(tok)
    except ValueError:
        raise ConfigError(f"expected an integer, got {tok!r}", lineno) from None


def _term(tokens: list[str], lineno: int, dim: int | None) -> tuple[tuple[int, ...], float]:
    if dim is None:
        raise ConfigError("'dim' must precede term blocks", lineno)
    p = _int(tokens[0], lineno)
    if p < 0 or len(tokens) != p + 2:
        raise ConfigError(f"term line must read 'p i1 .. ip c' with p = {tokens[0]}", lineno)
    idx = tuple(_int(t, lineno) for t in tokens[1:-1])
    if any(i < 1 or i > dim for i in idx):
        raise ConfigError(f"blade indices {idx} outside 1..{dim}", lineno)
    if any(a >= b for a, b in zip(idx, idx[1:])):
        raise ConfigError(f"blade indices {idx} are not strictly ascending", lineno)
    return idx, _num(tokens[-1], lineno)


def parse_config(text: str) -> ExperimentConfig:
    lines = [(k + 1, raw.split("#", 1)[0].split()) for k, raw in enumerate(text.splitlines())]
    lines = [(k, toks) for k, toks in lines if toks]
    values: dict = {}
    observables: list[Terms] = []
    hamiltonian: Terms | None = None
    dim: int | None = None
    pos = 0

    def take_block(start: int) -> tuple[Terms, int]:
        terms: Terms = {}
        j = start
        while j < len(lines):
            k, toks = lines[j]
            if toks == ["end"]:
                return {b: c for b, c in terms.items() if c != 0.0}, j + 1
            idx, c = _term(toks, k, dim)
            terms[idx] = terms.get(idx, 0.0) + c
            j += 1
        raise ConfigError("block is missing 'end'", lines[start - 1][0])

    while pos < len(lines):
        lineno, toks = lines[pos]
        key, args = toks[0], toks[1:]
        pos += 1
        if key == "dim":
            if len(args) != 1:
                raise ConfigError("usage: dim N", lineno)
            dim = _int(args[0], lineno)
            if not 1 <= dim <= 16:
                raise ConfigError(f"dim must be in 1..16, got {dim}", lineno)
            values["dim"] = dim
        elif key == "metric":
            if args == ["identity"]:
                values["metric_rows"] = None
            elif args == ["rows"]:
                if dim is None:
                    raise ConfigError("'dim' must precede 'metric rows'", lineno)
                rows = []
                for _ in range(dim):
                    if pos >= len(lines):
                        raise ConfigError(f"'metric rows' needs {dim} rows", lineno)
                    k, row = lines[pos]
                    if len(row) != dim:
                        raise ConfigError(f"metric row must have {dim} entries", k)
                    rows.append(tuple(_num(t, k) for t in row))
                    pos += 1
                values["metric_rows"] = tuple(rows)
            else:
                raise ConfigError("usage: metric identity | metric rows", lineno)
        elif key == "mode":
            if args not in (["classical"], ["quantum"]):
                raise ConfigError("usage: mode classical|quantum", lineno)
            values["mode"] = args[0]
        elif key == "rate":
            if len(args) != 1 or args[0] not in _RATES:
                raise ConfigError("usage: rate paper|matched", lineno)
            values["rate"] = args[0]
        elif key == "time":
            if len(args) != 3:
                raise ConfigError("usage: time t0 t1 steps", lineno)
            t0, t1, steps = _num(args[0], lineno), _num(args[1], lineno), _int(args[2], lineno)
            if not t1 > t0 or steps < 1:
                raise ConfigError("time needs t1 > t0 and steps >= 1", lineno)
            values.update(t0=t0, t1=t1, steps=steps)
        elif key == "hbar":
            if len(args) != 1:
                raise ConfigError("usage: hbar x", lineno)
            h = _num(args[0], lineno)
            if h < 0:
                raise ConfigError("hbar must be nonnegative", lineno)
            values["hbar"] = h
        elif key == "seed":
            if len(args) != 1:
                raise ConfigError("usage: seed s", lineno)
            values["seed"] = _int(args[0], lineno)
        elif key == "hamiltonian" and not args:
            if hamiltonian is not None:
                raise ConfigError("duplicate hamiltonian block", lineno)
            hamiltonian, pos = take_block(pos)
        elif key == "observable" and not args:
            block, pos = take_block(pos)
            observables.append(block)
        else:
            raise ConfigError(f"unknown directive {' '.join(toks)!r}", lineno)

    if dim is None:
        raise ConfigError("missing 'dim' directive")
    cfg = ExperimentConfig(hamiltonian=hamiltonian or {}, observables=observables, **values)
    try:
        cfg.metric()
    except FermiDynError as exc:
        raise ConfigError(f"invalid metric: {exc}") from None
    return cfg


def load_config(path: str | Path) -> ExperimentConfig:
    return parse_config(Path(path).read_text(encoding="utf-8"))


def _terms_block(name: str, terms: Terms) -> list[str]:
    out = [name]
    for idx in sorted(terms, key=lambda b: (len(b), b)):
        out.append(" ".join([str(len(idx)), *map(str, idx), repr(terms[idx])]))
    out.append("end")
    return out


def serialize_config(cfg: ExperimentConfig) -> str:
    lines = [f"dim {cfg.dim}"]
    if cfg.metric_rows is None:
        lines.append("metric identity")
    else:
        lines.append("metric rows")
        lines += [" ".join(repr(float(x)) for x in row) for row in cfg.metric_rows]
    lines += [
        f"mode {cfg.mode}",
        f"rate {cfg.rate}",
        f"time {cfg.t0!r} {cfg.t1!r} {cfg.steps}",
        f"hbar {cfg.hbar!r}",
        f"seed {cfg.seed}",
    ]
    lines += _terms_block("hamiltonian", cfg.hamiltonian)
    for obs in cfg.observables:
        lines += _terms_block("observable", obs)
    return "\n".join(lines) + "\n"
