import random
from fractions import Fraction

import mpmath
import pytest

from logtangent.errors import DomainError, PrecisionError, ToleranceError
from logtangent.logtan import (
    t_aux_series,
    t_fourier,
    t_quadrature,
    t_sine_series,
    t_value,
)
from logtangent.numkernel import tolerance
from oracles import catalan_averaged, catalan_oracle, t_tanh_sinh

G50 = catalan_oracle(60)


def close(a, b, eps):
    with mpmath.workdps(80):
        return abs(mpmath.mpf(a) - mpmath.mpf(b)) < mpmath.mpf(eps)


def test_catalan_oracles_agree():
    # two unrelated references for G before anything leans on them
    assert abs(catalan_averaged() - float(G50)) < 1e-12


def test_fourier_examples():
    assert close(t_fourier("1/2", 1e-8).value, 0, 2e-8)
    assert close(t_fourier("1/4", 1e-8).value, -G50, 2e-8)
    assert t_fourier(0, 1e-8).value == 0


def test_fourier_refuses_tight_tol():
    with pytest.raises(ToleranceError):
        t_fourier("1/5", 1e-13)


def test_sine_series_twelfth():
    val = t_sine_series("1/12", 50).value
    assert close(val, -2 * G50 / 3, "1e-48")
    assert close(val, t_fourier("1/12", 1e-10).value, 2e-10)


def test_sine_series_boundary():
    out = t_sine_series("1/4", 30)
    assert close(out.value, -G50, "1e-28")


def test_sine_series_vs_quadrature():
    assert close(t_sine_series("1/8", 30).value, t_quadrature("1/8", 30).value, "1e-25")


def test_sine_series_domain():
    with pytest.raises(DomainError):
        t_sine_series("1/3", 20)
    assert t_sine_series(0, 20).value == 0


def test_cos_harmonic_sixth():
    val = t_aux_series("1/6", "cos-harmonic", 30).value
    assert close(val, t_fourier("1/6", 1e-10).value, 2e-10)
    assert close(val, t_quadrature("1/6", 28).value, "1e-25")


def test_tan_power_quarter_is_minus_G():
    assert close(t_aux_series("1/4", "tan-power", 30).value, -G50, "1e-28")


def test_mixed_binomial_half():
    assert close(t_aux_series("1/2", "mixed-binomial", 20).value, 0, "1e-18")


def test_aux_domains():
    with pytest.raises(DomainError):
        t_aux_series("1/3", "tan-power", 20)
    with pytest.raises(DomainError):
        t_aux_series("1/5", "bogus", 20)


def test_quadrature_examples():
    assert close(t_quadrature("1/2", 25).value, 0, "1e-20")
    assert mpmath.nstr(t_quadrature("1/4", 20).value, 10) == "-0.9159655942"
    assert close(t_quadrature("1/3", 25).value, t_quadrature("1/6", 25).value, "1e-20")
    with pytest.raises(PrecisionError):
        t_quadrature("1/5", 40)


@pytest.mark.parametrize("r", ["1/7", "1/5", "3/10", "5/12", "0.49"])
def test_against_tanh_sinh(r):
    r = Fraction(r)
    assert close(t_value(r, 30).value, t_tanh_sinh(r, 30), "1e-27")


def test_methods_agree_on_random_angles():
    rng = random.Random(7)
    seen = set()
    while len(seen) < 50:
        b = rng.randint(3, 90)
        seen.add(Fraction(rng.randint(1, b // 4 or 1), b))
    for r in sorted(seen):
        if r > Fraction(1, 4):
            continue
        values = [
            t_sine_series(r, 20).value,
            t_aux_series(r, "cos-harmonic", 20).value,
            t_aux_series(r, "mixed-binomial", 20).value,
            t_aux_series(r, "tan-power", 20).value,
            t_quadrature(r, 20).value,
        ]
        for v in values[1:]:
            assert close(v, values[0], tolerance(20)), r


@pytest.mark.parametrize("r", ["1/9", "1/5", "1/4"])
def test_fourier_within_three_tau(r):
    tau = 1e-9
    assert close(t_fourier(r, tau).value, t_sine_series(r, 30).value, 3 * tau)


def test_negative_inside_open_interval():
    for r in ["1/100", "1/7", "1/4", "1/3", "99/200"]:
        assert t_value(r, 20).value < 0
    assert t_value(0, 20).value == 0
    assert abs(t_value("1/2", 20).value) < tolerance(20)


def test_fourier_backends_agree():
    numba = pytest.importorskip("numba")  # noqa: F841
    a = t_fourier("2/7", 1e-7, backend="numba").value
    b = t_fourier("2/7", 1e-7, backend="numpy").value
    assert abs(a - b) < 1e-13
