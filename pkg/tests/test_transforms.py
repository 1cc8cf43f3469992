import random
from fractions import Fraction

import mpmath
import pytest
from hypothesis import given
from hypothesis import strategies as st

from logtangent.errors import DomainError, PoleError
from logtangent.logtan import t_quadrature, t_value
from logtangent.numkernel import RationalAngle, tolerance
from logtangent.transforms import (
    SignedTSum,
    alt_decomposition,
    alt_decomposition_relation,
    canonical,
    lemma1_residual,
    multiplication_relation,
    multiplication_rhs,
    reflect,
)
from oracles import catalan_oracle

F = Fraction
angles = st.builds(
    lambda b, a: F(a % (b // 2 + 1), b),
    st.integers(min_value=1, max_value=400),
    st.integers(min_value=0, max_value=10**6),
)


def T(x):
    return RationalAngle.of(x)


def test_reflect_examples():
    assert reflect("1/12") == T("5/12")
    assert reflect("1/4") == T("1/4")
    assert reflect("1/10") == T("2/5")
    assert canonical("3/8") == T("1/8")


@given(angles)
def test_reflect_involution(r):
    assert reflect(reflect(r)) == T(r)
    assert canonical(r).fraction <= F(1, 4)


def test_signed_sum_merges():
    s = SignedTSum.build([(1, "1/5"), (2, "1/5"), (-3, "1/5"), (4, "0"), (1, "1/7")])
    assert s.terms == ((F(1), T("1/7")),)
    assert str(SignedTSum.build([(-3, "1/9"), (1, "1/3")])) == "-3 T(1/9) + T(1/3)"


def test_multiplication_ninth():
    rhs = multiplication_rhs(3, "1/9", normalize=False)
    expected = SignedTSum.build([(3, "1/9"), (3, "4/9"), (-3, "2/9")])
    assert rhs == expected


def test_multiplication_zero_collapses():
    assert multiplication_rhs(3, 0, normalize=False).is_zero()
    assert multiplication_relation(3, 0).is_zero()


def test_multiplication_twentieth():
    # T(1/4) = 5[T(1/20) + T(1/4) + T(9/20)] - 5[T(3/20) + T(7/20)], reflected
    rel = multiplication_relation(5, "1/20")
    assert rel == SignedTSum.build([(-4, "1/4"), (-10, "1/20"), (10, "3/20")])
    assert rel.scale(F(1, 2)) == SignedTSum.build([(-2, "1/4"), (-5, "1/20"), (5, "3/20")])


@pytest.mark.parametrize("m,r", [(4, "1/20"), (1, "1/20"), (3, "1/5")])
def test_multiplication_domain(m, r):
    with pytest.raises(DomainError):
        multiplication_rhs(m, r)


def test_multiplication_numeric():
    rng = random.Random(3)
    for m in range(3, 12, 2):
        for _ in range(6):
            r = F(rng.randint(1, 40), rng.randint(2 * m * 40, 2 * m * 120))
            assert abs(multiplication_relation(m, r).evaluate(40)) < tolerance(40)


def test_lemma1_examples():
    with mpmath.workdps(40):
        assert lemma1_residual(3, mpmath.pi / 12, 30) < mpmath.mpf("1e-25")
        assert lemma1_residual(5, mpmath.pi / 40, 30) < mpmath.mpf("1e-25")
    assert lemma1_residual(1, "0.3", 30) == 0


def test_lemma1_pole():
    with mpmath.workdps(40):
        with pytest.raises(PoleError):
            lemma1_residual(3, mpmath.pi / 6, 30)
    with pytest.raises(DomainError):
        lemma1_residual(4, "0.1", 30)


def test_decomposition_small_cases():
    # 2T(1/4) = 3T(1/12)
    assert alt_decomposition(1) == SignedTSum.build([(F(-3, 2), "1/12")])
    # 2T(1/4) = 5T(3/20) - 5T(1/20)
    assert alt_decomposition(2) == SignedTSum.build([(F(5, 2), "1/20"), (F(-5, 2), "3/20")])
    d3 = alt_decomposition(3)
    assert d3 == SignedTSum.build([(F(-7, 4), "1/28"), (F(7, 4), "3/28"), (F(-7, 4), "5/28")])


@pytest.mark.parametrize("n", range(1, 9))
def test_decompositions_equal_G(n):
    G = catalan_oracle(60)
    assert abs(alt_decomposition(n).evaluate(50) - G) < tolerance(50)
    assert abs(alt_decomposition_relation(n).evaluate(50)) < tolerance(50)


def test_reflection_under_quadrature():
    rng = random.Random(11)
    for _ in range(40):
        b = rng.randint(3, 60)
        r = F(rng.randint(1, b // 2), b)
        if r in (0, F(1, 2)):
            continue
        a = t_quadrature(r, 16).value
        b_ = t_quadrature(F(1, 2) - r, 16).value
        assert abs(a - b_) < tolerance(16)


def test_reflection_series():
    for r in ["1/7", "2/9", "1/13", "3/40"]:
        assert abs(t_value(r, 40).value - t_value(reflect(r), 40).value) < tolerance(40)
