import pytest

from fermidyn.algebra import Metric, Multivector, casalbuoni_bracket, wedge
from fermidyn.clifford import (
    DeformationParameter,
    clifford_commutator,
    clifford_product,
    deformation_derivative,
    wick_blade_product,
    wick_product,
)
from fermidyn.errors import DimMismatch, FermiDynError
from fermidyn.identities import dagger_residuals
from fermidyn.oracle import oracle_multivector
from fermidyn.sampling import random_form, random_multivector, random_spd, random_vector, rng_from_seed


def e(n, *idx):
    return Multivector.blade(n, idx)


def metrics(rng, n):
    return [Metric.identity(n), random_spd(rng, n)]


def test_vector_squares():
    m = Metric.identity(2)
    assert clifford_product(e(2, 1), e(2, 1), m) == Multivector.scalar(2)
    assert clifford_product(e(2, 1), e(2, 2), m) == e(2, 1, 2)


def test_bivector_square_against_pairing_oracle():
    m = Metric.identity(2)
    ref = oracle_multivector("clifford", e(2, 1, 2), e(2, 1, 2), m)
    assert ref == Multivector.scalar(2, -1.0)
    assert clifford_product(e(2, 1, 2), e(2, 1, 2), m) == ref


def test_unit():
    rng = rng_from_seed(1)
    for m in metrics(rng, 4):
        A = random_multivector(rng, 4)
        one = Multivector.scalar(4)
        assert clifford_product(one, A, m) == A
        assert (clifford_product(A, one, m) - A).norm_inf() == 0.0


def test_dim_mismatch():
    with pytest.raises(DimMismatch):
        clifford_product(e(2, 1), e(3, 1), Metric.identity(2))


def test_deformation_parameter():
    assert DeformationParameter(0.5).hbar == 0.5
    with pytest.raises(FermiDynError):
        DeformationParameter(-1.0)
    with pytest.raises(FermiDynError):
        DeformationParameter(float("inf"))


@pytest.mark.parametrize("hbar", [0.5, 1.0, 2.0])
def test_associativity(hbar):
    rng = rng_from_seed(int(hbar * 10))
    for n in (3, 4, 5):
        for m in metrics(rng, n):
            for _ in range(5):
                A, B, C = (random_multivector(rng, n) for _ in range(3))
                lhs = clifford_product(clifford_product(A, B, m, hbar), C, m, hbar)
                rhs = clifford_product(A, clifford_product(B, C, m, hbar), m, hbar)
                assert (lhs - rhs).norm_inf() <= 1e-10


@pytest.mark.parametrize("hbar", [0.5, 1.0, 2.0])
def test_defining_relation(hbar):
    rng = rng_from_seed(7)
    for n in (2, 4, 5):
        for m in metrics(rng, n):
            for _ in range(20):
                u, v = random_vector(rng, n), random_vector(rng, n)
                anti = clifford_product(u, v, m, hbar) + clifford_product(v, u, m, hbar)
                expected = Multivector.scalar(n, 2 * hbar * m(u, v))
                assert (anti - expected).norm_inf() <= 1e-12


def test_hbar_zero_is_wedge():
    rng = rng_from_seed(3)
    for m in metrics(rng, 4):
        A, B = random_multivector(rng, 4), random_multivector(rng, 4)
        assert clifford_product(A, B, m, 0.0) == wedge(A, B)
        assert clifford_product(A, B, m, DeformationParameter(0.0)) == wedge(A, B)


def test_commutator_examples():
    m = Metric.identity(3)
    assert clifford_commutator(e(3, 1), e(3, 1), m).is_zero()
    ref = oracle_multivector("clifford", e(3, 1, 2), e(3, 2, 3), m) - oracle_multivector("clifford", e(3, 2, 3), e(3, 1, 2), m)
    assert ref == 2.0 * e(3, 1, 3)
    assert clifford_commutator(e(3, 1, 2), e(3, 2, 3), m) == ref
    A = random_multivector(rng_from_seed(0), 3)
    assert clifford_commutator(Multivector.scalar(3), A, m).is_zero()
    assert clifford_commutator(A, A, m).norm_inf() <= 1e-15


def test_commutator_with_two_form_is_bracket():
    rng = rng_from_seed(21)
    for m in metrics(rng, 4):
        H = random_form(rng, 4, 2)
        A = random_multivector(rng, 4)
        diff = clifford_commutator(H, A, m) - casalbuoni_bracket(H, A, m)
        assert diff.norm_inf() <= 1e-12


def test_deformation_derivative_examples():
    m = Metric.identity(3)
    assert deformation_derivative(e(3, 1), e(3, 1), m) == Multivector.scalar(3)
    A = random_multivector(rng_from_seed(5), 3)
    assert deformation_derivative(Multivector.scalar(3), A, m).is_zero()
    # e12 e23 = hbar e13 exactly, so the first-order part is e13
    assert clifford_product(e(3, 1, 2), e(3, 2, 3), m, 0.3) == 0.3 * e(3, 1, 3)
    assert deformation_derivative(e(3, 1, 2), e(3, 2, 3), m) == e(3, 1, 3)
    assert 0.5 * casalbuoni_bracket(e(3, 1, 2), e(3, 2, 3), m) == e(3, 1, 3)


def test_deformation_derivative_matches_finite_difference():
    # second-order one-sided difference; hbar may not go negative
    rng = rng_from_seed(6)
    d = 1e-5
    for n in (3, 4):
        for m in metrics(rng, n):
            for _ in range(5):
                A, B = random_multivector(rng, n), random_multivector(rng, n)
                f0 = clifford_product(A, B, m, 0.0)
                f1 = clifford_product(A, B, m, d)
                f2 = clifford_product(A, B, m, 2 * d)
                fd = (-3.0 * f0 + 4.0 * f1 - f2) / (2 * d)
                assert (fd - deformation_derivative(A, B, m)).norm_inf() <= 1e-8
                assert (deformation_derivative(A, B, m) - 0.5 * casalbuoni_bracket(A, B, m)).norm_inf() <= 1e-12


def first_order_residual(A, B, m, hbar):
    return (clifford_product(A, B, m, hbar) - wedge(A, B) - hbar * deformation_derivative(A, B, m)).norm_inf()


def test_first_deformation_law_is_second_order():
    rng = rng_from_seed(17)
    for m in metrics(rng, 4):
        A, B = random_multivector(rng, 4), random_multivector(rng, 4)
        ratio = first_order_residual(A, B, m, 1e-3) / first_order_residual(A, B, m, 5e-4)
        assert ratio == pytest.approx(4.0, rel=0.1)


@pytest.mark.parametrize("metric_kind", ["identity", "spd"])
def test_dagger_identities(metric_kind):
    rng = rng_from_seed(31)
    for n in (2, 3, 4, 5):
        m = Metric.identity(n) if metric_kind == "identity" else random_spd(rng, n)
        for _ in range(10):
            A, B, C = (random_multivector(rng, n) for _ in range(3))
            for name, value in dagger_residuals(A, B, C, m).items():
                assert value <= 1e-10, name


def test_wick_sign_of_separated_contraction():
    # e2 (e1 ^ e2): the two e2 factors are separated by e1, one transposition
    m = Metric.identity(2)
    assert wick_blade_product(0b10, 0b11, m) == {0b01: -1.0}
    assert clifford_product(e(2, 2), e(2, 1, 2), m) == -e(2, 1)
    assert wick_blade_product(0b01, 0b11, m) == {0b10: 1.0}


def test_wick_matches_recursive_product():
    rng = rng_from_seed(41)
    for n in (3, 4, 5):
        for m in metrics(rng, n):
            for hbar in (0.5, 1.0):
                for _ in range(10):
                    A, B = random_multivector(rng, n), random_multivector(rng, n)
                    diff = clifford_product(A, B, m, hbar) - wick_product(A, B, m, hbar)
                    assert diff.norm_inf() <= 1e-12
