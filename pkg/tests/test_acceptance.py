"""Acceptance criteria, each at its stated tolerance.

Every test records one ``PASS`` or ``FAIL`` line, printed in the
"acceptance criteria" section at the end of the pytest run.
"""

import math
import subprocess
import sys
import time
from pathlib import Path

import numpy as np
import pytest

from fermidyn.algebra import Generator, Metric, Multivector, orthogonality_defect, two_form_of, wedge
from fermidyn.clifford import clifford_product, deformation_derivative
from fermidyn.compare import KINDS, exhaustive_sweep, wick_consistency
from fermidyn.dynamics import EvolutionSpec, evolution_operator, evolve_observable, evolve_phase, noether_drift
from fermidyn.identities import run_identity_suite
from fermidyn.sampling import random_form, random_generator, random_multivector, random_spd, rng_from_seed

pytestmark = pytest.mark.acceptance

FIXTURES = Path(__file__).parent / "fixtures"
ROT = np.array([[0.0, -1.0], [1.0, 0.0]])


def plane(n, i, j):
    M = np.zeros((n, n))
    M[j - 1, i - 1], M[i - 1, j - 1] = 1.0, -1.0
    return Generator(M, Metric.identity(n))


def test_criterion_1_identity_suite(criterion):
    start = time.perf_counter()
    worst = 0.0
    failures = []
    for n in (4, 5):
        for m in (Metric.identity(n), random_spd(rng_from_seed(100 + n), n)):
            rep = run_identity_suite(n, m, trials=200, seed=n)
            worst = max(worst, max(rep.residuals.values()))
            failures += rep.failures(1e-9)
    elapsed = time.perf_counter() - start
    names = set(rep.residuals)
    ok = not failures and worst <= 1e-9 and elapsed < 30.0 and len(names) >= 8
    criterion(1, "identity suite", ok, f"{len(names)} identities, max residual {worst:.2e} <= 1e-9, {elapsed:.1f}s < 30s")


def test_criterion_2_oracle_equivalence(criterion):
    start = time.perf_counter()
    worst = 0.0
    pairs = 0
    for n in (3, 4):
        for m in (Metric.identity(n), random_spd(rng_from_seed(200 + n), n)):
            res = exhaustive_sweep(n, m, KINDS)
            worst = max(worst, res.max_deviation)
            pairs += res.count
    elapsed = time.perf_counter() - start
    ok = worst <= 1e-10 and elapsed < 60.0
    criterion(2, "oracle equivalence", ok,
              f"{pairs} blade pairs x {len(KINDS)} kinds, max deviation {worst:.2e} <= 1e-10, {elapsed:.1f}s < 60s")


def test_criterion_3_wick_consistency(criterion):
    worst = max(wick_consistency(5, m, pairs=250, seed=3)
                for m in (Metric.identity(5), random_spd(rng_from_seed(300), 5)))
    criterion(3, "Wick consistency", worst <= 1e-12, f"500 pairs at n=5, max deviation {worst:.2e} <= 1e-12")


def test_criterion_4_canonical_property(criterion):
    rng = rng_from_seed(400)
    worst = 0.0
    for k in range(100):
        m = Metric.identity(5) if k % 2 == 0 else random_spd(rng, 5)
        H = random_generator(rng, m)
        t = rng.uniform(-10.0, 10.0)
        worst = max(worst, orthogonality_defect(evolution_operator(H, t).matrix, m))
    criterion(4, "canonical property", worst <= 1e-10, f"100 generators, max ||U^T G U - G|| {worst:.2e} <= 1e-10")


def test_criterion_5_evolution_consistency(criterion):
    # rotation closed form
    rot = Generator(ROT, Metric.identity(2))
    spec = EvolutionSpec(Metric.identity(2), rot, Multivector.basis(2, 1), t1=2 * math.pi, steps=40)
    rot_dev = max((A - Multivector.vector([math.cos(t), math.sin(t)])).norm_inf()
                  for t, A in evolve_observable(spec))
    # random generator at n = 4
    rng = rng_from_seed(500)
    m = random_spd(rng, 4)
    H = random_generator(rng, m)
    spec = EvolutionSpec(m, H, Multivector.vector(rng.normal(size=4)), t1=3.0, steps=30)
    rnd_dev = max((A - eta).norm_inf() for (_, A), (_, eta) in zip(evolve_observable(spec), evolve_phase(spec)))
    # Hamiltonian self-conservation
    Hc = two_form_of(H)
    Hq = Hc + 0.5 * random_form(rng, 4, 3)
    drift_c = max((A - Hc).norm_inf() for _, A in evolve_observable(EvolutionSpec(m, H, Hc, t1=3.0, steps=30)))
    drift_q = max((A - Hq).norm_inf()
                  for _, A in evolve_observable(EvolutionSpec(m, Hq, Hq, t1=3.0, steps=30, mode="quantum")))
    # Noether
    commuting = noether_drift(plane(4, 1, 2), plane(4, 3, 4), 1.0)
    so3 = noether_drift(plane(3, 1, 2), plane(3, 2, 3), 1.0)
    ok = (rot_dev <= 1e-8 and rnd_dev <= 1e-8 and drift_c <= 1e-9 and drift_q <= 1e-9
          and commuting <= 1e-9 and so3 > 0.1)
    criterion(5, "evolution consistency", ok,
              f"rotation {rot_dev:.1e}, random n=4 {rnd_dev:.1e} <= 1e-8; H drift classical {drift_c:.1e}, "
              f"quantum {drift_q:.1e} <= 1e-9; Noether commuting {commuting:.1e} <= 1e-9, so(3) {so3:.2f} > 0.1")


def test_criterion_6_deformation_limits(criterion):
    rng = rng_from_seed(600)
    exact = True
    ratios = []
    for n in (3, 4, 5):
        for m in (Metric.identity(n), random_spd(rng, n)):
            for _ in range(5):
                A, B = random_multivector(rng, n), random_multivector(rng, n)
                exact &= clifford_product(A, B, m, 0.0) == wedge(A, B)
                w, d = wedge(A, B), deformation_derivative(A, B, m)
                r1 = (clifford_product(A, B, m, 1e-3) - w - 1e-3 * d).norm_inf()
                r2 = (clifford_product(A, B, m, 5e-4) - w - 5e-4 * d).norm_inf()
                ratios.append(r1 / r2)
    lo, hi = min(ratios), max(ratios)
    ok = exact and 3.6 <= lo and hi <= 4.4
    criterion(6, "deformation limits", ok, f"hbar=0 exact: {exact}; halving ratio in [{lo:.3f}, {hi:.3f}] within 4 +/- 10%")


def test_criterion_7_integrator_order(criterion):
    rot = Generator(ROT, Metric.identity(2))
    exact = Multivector.vector(evolution_operator(rot, 2 * math.pi).matrix @ [1.0, 0.0])

    def err(steps):
        spec = EvolutionSpec(Metric.identity(2), rot, Multivector.basis(2, 1), t1=2 * math.pi, steps=steps, substeps=1)
        return (evolve_observable(spec)[-1][1] - exact).norm_inf()

    ratio = err(40) / err(80)
    criterion(7, "integrator order", abs(ratio - 16.0) <= 0.2 * 16.0, f"error ratio {ratio:.2f} within 16 +/- 20%")


def test_criterion_8_determinism(criterion, tmp_path):
    out = tmp_path / "rotation.csv"
    subprocess.run([sys.executable, "-m", "fermidyn", "evolve", str(FIXTURES / "rotation.cfg"), str(out)], check=True)
    same = out.read_bytes() == (FIXTURES / "rotation_golden.csv").read_bytes()
    criterion(8, "determinism", same, "evolve output byte-identical to the golden CSV")
