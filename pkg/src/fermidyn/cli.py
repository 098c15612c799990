"""Command-line entry point: ``fermidyn {check-identities,evolve,deform,oracle-compare}``.

Exit codes: 0 pass, 1 check or constraint failure, 2 usage or parse error.
"""

from __future__ import annotations

import argparse
import sys
import time
from pathlib import Path

import numpy as np

from .algebra import Metric, casalbuoni_bracket, wedge
from .clifford import clifford_product
from .compare import KINDS, exhaustive_sweep
from .config import load_config
from .dynamics import evolve_observable
from .errors import ConfigError, FermiDynError, ModeMismatch, NotAntiHermitian
from .identities import run_identity_suite
from .oracle import ORACLE_MAX_DIM
from .output import deform_csv, trajectory_csv
from .sampling import random_spd, rng_from_seed

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2
SWEEP_TOL = 1e-10


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def read_gram(path: str | Path) -> Metric:
    rows = []
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        line = line.split("#", 1)[0].strip()
        if line:
            rows.append([float(x) for x in line.replace(",", " ").split()])
    return Metric(np.array(rows, dtype=float))


def _write(text: str, out: str):
    if out == "-":
        sys.stdout.write(text)
    else:
        with open(out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)


def cmd_check_identities(args) -> int:
    if args.metric == "identity":
        m = Metric.identity(args.dim)
    elif args.metric == "random":
        m = random_spd(rng_from_seed(args.seed), args.dim)
    else:
        try:
            m = read_gram(args.metric)
        except (OSError, ValueError) as exc:
            print(f"error: cannot read metric {args.metric}: {exc}", file=sys.stderr)
            return EXIT_USAGE
        if m.dim != args.dim:
            print(f"error: metric is {m.dim}x{m.dim}, --dim is {args.dim}", file=sys.stderr)
            return EXIT_USAGE
    start = time.perf_counter()
    report = run_identity_suite(args.dim, m, trials=args.trials, seed=args.seed)
    elapsed = time.perf_counter() - start
    print(f"identity suite: dim={args.dim} metric={args.metric} trials={args.trials} seed={args.seed} tol={args.tol:g}")
    for line in report.lines(args.tol):
        print("  " + line)
    ok = report.passed(args.tol)
    print(f"{'PASS' if ok else 'FAIL'} ({elapsed:.2f}s)")
    return EXIT_OK if ok else EXIT_FAIL


def cmd_evolve(args) -> int:
    try:
        cfg = load_config(args.config)
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ConfigError as exc:
        print(f"error: {args.config}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    m = cfg.metric()
    try:
        spec = cfg.evolution_spec(m)
        traj = evolve_observable(spec)
    except ModeMismatch as exc:
        print(f"ModeMismatch: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except NotAntiHermitian as exc:
        print(f"NotAntiHermitian: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except ConfigError as exc:
        print(f"error: {args.config}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except FermiDynError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL
    _write(trajectory_csv(traj, m), args.out)
    return EXIT_OK


def deform_rows(A, B, m: Metric, hbars) -> list[tuple[float, float, float]]:
    w = wedge(A, B)
    half = 0.5 * casalbuoni_bracket(A, B, m)
    rows = []
    for h in hbars:
        AB = clifford_product(A, B, m, h)
        rows.append((h, (AB - w).norm_inf(), (AB - w - h * half).norm_inf()))
    return rows


def cmd_deform(args) -> int:
    try:
        cfg = load_config(args.config)
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ConfigError as exc:
        print(f"error: {args.config}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    obs = cfg.observable_mvs()
    if not obs or len(obs) > 2:
        print("error: deform needs one or two observable blocks", file=sys.stderr)
        return EXIT_USAGE
    A = obs[0]
    B = obs[1] if len(obs) == 2 else obs[0]
    hbars = args.hbar if args.hbar else [cfg.hbar]
    if any(h < 0 for h in hbars):
        print("error: hbar values must be nonnegative", file=sys.stderr)
        return EXIT_USAGE
    _write(deform_csv(deform_rows(A, B, cfg.metric(), hbars)), args.out)
    return EXIT_OK


def cmd_oracle_compare(args) -> int:
    metrics = [("identity", Metric.identity(args.dim)),
               (f"random-spd(seed={args.seed})", random_spd(rng_from_seed(args.seed), args.dim))]
    ok = True
    start = time.perf_counter()
    for name, m in metrics:
        res = exhaustive_sweep(args.dim, m, KINDS)
        for kind in KINDS:
            dev = res.worst[kind]
            flag = dev <= SWEEP_TOL
            ok &= flag
            extra = "" if flag else f"  worst pair {res.worst_pair[kind]}"
            print(f"{name:24s} {kind:9s} max deviation {dev:.3e}  {'ok' if flag else 'FAIL'}{extra}")
    print(f"{'PASS' if ok else 'FAIL'}: {len(metrics)} metrics x {(1 << args.dim) ** 2} blade pairs "
          f"({time.perf_counter() - start:.2f}s)")
    return EXIT_OK if ok else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="fermidyn", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("check-identities", help="run the bracket, involution and deformation identity suites")
    p.add_argument("--dim", type=int, required=True)
    p.add_argument("--metric", default="identity", help="'identity', 'random', or a file of gram rows")
    p.add_argument("--trials", type=int, default=200)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--tol", type=float, default=1e-9)
    p.set_defaults(func=cmd_check_identities)

    p = sub.add_parser("evolve", help="integrate an observable and write its trajectory as CSV")
    p.add_argument("config")
    p.add_argument("out", help="output CSV path, '-' for stdout")
    p.set_defaults(func=cmd_evolve)

    p = sub.add_parser("deform", help="tabulate the hbar deformation residuals")
    p.add_argument("config")
    p.add_argument("out", help="output CSV path, '-' for stdout")
    p.add_argument("--hbar", type=float, nargs="+", help="hbar values (default: config hbar)")
    p.set_defaults(func=cmd_deform)

    p = sub.add_parser("oracle-compare", help="exhaustive blade-pair comparison with the dense oracle")
    p.add_argument("--dim", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_oracle_compare)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "check-identities":
        if not 1 <= args.dim <= ORACLE_MAX_DIM:
            parser.error(f"--dim must be in 1..{ORACLE_MAX_DIM}")
        if args.trials < 1:
            parser.error("--trials must be positive")
    if args.command == "oracle-compare" and not 1 <= args.dim <= ORACLE_MAX_DIM:
        parser.error(f"--dim must be in 1..{ORACLE_MAX_DIM} (oracle cap)")
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
