"""Evaluators for the log tangent integral ``T(r) = int_0^{r pi} log(tan t) dt``.

Five independent routes are provided so that each can serve as an oracle for
the others:

* ``t_fourier``      -- Fourier sine series, ``1/k**2`` convergence, float64.
* ``t_sine_series``  -- expansion in odd powers of ``2 sin 2x`` damped by the
  central binomial coefficient; geometric for ``r < 1/4``.
* ``t_aux_series``   -- three further expansions (``tan-power``,
  ``cos-harmonic``, ``mixed-binomial``).
* ``t_quadrature``   -- adaptive Gauss-Legendre on the integrand with its
  logarithmic endpoint singularities removed analytically.

``t_value`` picks the fastest applicable series and is what the rest of the
package uses.  Every route returns exactly ``0`` at ``r = 0``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Literal

import mpmath
import numpy as np
from mpmath import mpf

from . import _kernels
from ._extrapolate import extrapolate_series
from .errors import DomainError, PrecisionError, ToleranceError
from .numkernel import (
    AngleLike,
    RationalAngle,
    as_angle,
    pi_raw,
    round_to,
    trig_raw,
    working_precision,
)

Method = Literal["fourier", "sine-power", "tan-power", "cos-harmonic", "mixed-binomial", "quadrature"]
AuxVariant = Literal["tan-power", "cos-harmonic", "mixed-binomial"]

QUARTER = Fraction(1, 4)
HALF = Fraction(1, 2)

#: Loosest tolerance accepted by :func:`t_fourier`.
FOURIER_MIN_TOL = 1e-12
#: Highest precision accepted by :func:`t_quadrature`.
QUADRATURE_MAX_PREC = 30


@dataclass(frozen=True)
class TValue:
    angle: RationalAngle
    value: mpf
    method: str
    terms_used: int
    prec: int | None = None

    def __float__(self) -> float:
        return float(self.value)


def _zero(angle: RationalAngle, method: str, prec: int | None) -> TValue:
    return TValue(angle, mpf(0), method, 0, prec)


def _estimate_terms(ratio: float, digits: int) -> int:
    if ratio <= 0.0:
        return 1
    if ratio >= 1.0:
        return 10**6
    return int(digits * math.log(10) / -math.log(ratio)) + 2


# --------------------------------------------------------------------------
# Fourier series (low precision)
# --------------------------------------------------------------------------


def fourier_terms(tol: float) -> int:
    """Smallest ``K`` with ``sum_{k>=K} (2k+1)**-2 <= 1/(2(2K-1)) < tol``."""
    return max(1, math.ceil((1.0 / (2.0 * tol) + 1.0) / 2.0) + 1)


def fourier_period_table(angle: RationalAngle) -> np.ndarray:
    """``sin((4i+2) r pi)`` for ``i`` over one period (length ``den``)."""
    p, q = angle.num, angle.den
    with mpmath.workdps(30):
        vals = [float(mpmath.sinpi(mpf((4 * i + 2) * p) / q)) for i in range(q)]
    return np.array(vals, dtype=np.float64)


def t_fourier(r: AngleLike, tol: float | mpf | str = 1e-8, backend: str | None = None) -> TValue:
    """Fourier-series value of ``T(r)``, accurate to ``2*tol``.

    Deliberately a low-precision oracle: the tail is bounded only through
    ``sum (2k+1)**-2``, so ``tol`` below ``1e-12`` is refused.
    """
    angle = as_angle(r)
    tol = float(tol)
    if not tol > 0:
        raise ToleranceError("tolerance must be positive")
    if tol < FOURIER_MIN_TOL:
        raise ToleranceError(
            f"tolerance {tol:g} is below {FOURIER_MIN_TOL:g}; the Fourier series converges like 1/k^2"
        )
    if angle.num == 0:
        return _zero(angle, "fourier", None)
    n_terms = fourier_terms(tol)
    total = _kernels.fourier_sum(fourier_period_table(angle), n_terms, backend=backend)
    return TValue(angle, mpf(-total), "fourier", n_terms, None)


# --------------------------------------------------------------------------
# Sine-power series (the production workhorse for r < 1/4)
# --------------------------------------------------------------------------


def _boundary_x_log_tan(frac: Fraction) -> mpf:
    """``x log(tan x)`` at ``x = frac*pi`` (current precision, 0 < frac < 1/2)."""
    if frac == QUARTER:
        return mpf(0)
    return pi_raw() * frac.numerator / frac.denominator * mpmath.log(trig_raw(frac, "tan"))


def sine_series_sum(s: mpf, eps: mpf) -> tuple[mpf, int]:
    """``sum_k (2s)**(2k+1) / ((2k+1)**2 C(2k,k))`` for ``0 <= s < 1``.

    Truncated once the first omitted term times ``1/(1 - s**2)`` is below
    ``eps``; successive terms shrink by a factor below ``s**2``.
    """
    s2 = s * s
    damp = 1 / (1 - s2)
    u = 2 * s
    total = mpf(0)
    k = 0
    while True:
        odd = 2 * k + 1
        term = u / (odd * odd)
        if term * damp < eps:
            return total, k
        total += term
        u = u * s2 * (2 * k + 2) / odd
        k += 1


def _slow_sine_series(prec: int) -> tuple[mpf, int]:
    """The ``s = 1`` case: ``sum 2**(2k+1)/((2k+1)**2 C(2k,k))``, ~``k**-1.5``."""
    state = {"u": mpf(2)}

    def term(k: int) -> mpf:
        u = state["u"]
        odd = 2 * k + 1
        state["u"] = u * (2 * k + 2) / odd
        return u / (odd * odd)

    out = extrapolate_series(term, lead=0.5, prec=prec)
    return out.value, out.terms_used


def t_sine_series(r: AngleLike, prec: int = 30) -> TValue:
    """``T(r) = x log tan x - 1/4 sum (2 sin 2x)^(2k+1)/((2k+1)^2 C(2k,k))``.

    Valid for ``0 <= r <= 1/4``.  At ``r = 1/4`` the series converges only like
    ``k**(-3/2)`` and is summed by extrapolation of its partial sums.
    """
    angle = as_angle(r)
    frac = angle.fraction
    if frac > QUARTER:
        raise DomainError(f"sine-power series needs r <= 1/4, got {angle}")
    if frac == 0:
        return _zero(angle, "sine-power", prec)
    if frac == QUARTER:
        series, terms = _slow_sine_series(prec + 5)
        with working_precision(prec):
            value = -series / 4
        return TValue(angle, round_to(value, prec), "sine-power", terms, prec)
    s_float = math.sin(2 * math.pi * float(frac))
    terms_guess = _estimate_terms(s_float * s_float, prec + 12)
    with working_precision(prec, terms_guess) as dps:
        s = trig_raw(2 * frac, "sin")
        series, terms = sine_series_sum(s, mpf(10) ** (-dps))
        value = _boundary_x_log_tan(frac) - series / 4
    return TValue(angle, round_to(value, prec), "sine-power", terms, prec)


# --------------------------------------------------------------------------
# The three auxiliary expansions
# --------------------------------------------------------------------------


def _alternating_cvz(a, n: int) -> mpf:
    """Cohen-Rodriguez Villegas-Zagier sum of ``sum (-1)^k a(k)``, ``n`` terms."""
    d = (3 + mpmath.sqrt(8)) ** n
    d = (d + 1 / d) / 2
    b = mpf(-1)
    c = -d
    s = mpf(0)
    for k in range(n):
        c = b - c
        s += c * a(k)
        b = b * (k + n) * (k - n) / ((k + mpf(1) / 2) * (k + 1))
    return s / d


def _tan_power(frac: Fraction, prec: int) -> TValue:
    angle = RationalAngle.of(frac)
    if frac == QUARTER:
        # tan x = 1: the series is -sum (-1)^k/(2k+1)^2, an alternating series.
        n = int(1.31 * (prec + 12)) + 4
        with working_precision(prec, n):
            value = -_alternating_cvz(lambda k: mpf(1) / (2 * k + 1) ** 2, n)
        return TValue(angle, round_to(value, prec), "tan-power", n, prec)
    t_float = math.tan(math.pi * float(frac))
    terms_guess = _estimate_terms(t_float * t_float, prec + 12)
    with working_precision(prec, terms_guess) as dps:
        eps = mpf(10) ** (-dps)
        t = trig_raw(frac, "tan")
        t2 = t * t
        power = t
        total = mpf(0)
        sign = -1
        k = 0
        while True:
            odd = 2 * k + 1
            term = power / (odd * odd)
            if term < eps:
                break
            total += term if sign > 0 else -term
            power *= t2
            sign = -sign
            k += 1
        value = _boundary_x_log_tan(frac) + total
    return TValue(angle, round_to(value, prec), "tan-power", k, prec)


def _cos_harmonic(frac: Fraction, prec: int) -> TValue:
    angle = RationalAngle.of(frac)
    if frac == HALF:
        # cos x = 0 kills the series and (pi/2 - x) log cos x -> 0.
        return _zero(angle, "cos-harmonic", prec)
    c_float = math.cos(math.pi * float(frac))
    terms_guess = _estimate_terms(c_float, prec + 12)
    with working_precision(prec, terms_guess) as dps:
        eps = mpf(10) ** (-dps)
        c = trig_raw(frac, "cos")
        s = trig_raw(frac, "sin")
        damp = 1 / (1 - c)
        # z = c exp(ix), so Im(z^k) = c^k sin(kx) and |z^k| = c^k
        zr, zi = c * c, c * s
        pr, pi_ = zr, zi
        ck = c
        total = mpf(0)
        k = 1
        while True:
            total += pi_ / (k * k)
            ck *= c
            if ck * damp / ((k + 1) * (k + 1)) < eps:
                break
            pr, pi_ = pr * zr - pi_ * zi, pr * zi + pi_ * zr
            k += 1
        x_comp = pi_raw() * (HALF - frac).numerator / (HALF - frac).denominator
        value = x_comp * mpmath.log(c) - total
    return TValue(angle, round_to(value, prec), "cos-harmonic", k, prec)


def _mixed_binomial(frac: Fraction, prec: int) -> TValue:
    angle = RationalAngle.of(frac)
    if frac == HALF:
        # x log tan x + (pi/2) log(2 cos x) -> (pi/2) log 2 as x -> pi/2, and the
        # sine part of the series converges like k^(-5/2).
        state = {"w": mpf(1)}

        def term(k: int) -> mpf:
            w = state["w"]
            state["w"] = w * (2 * k + 1) / (2 * k + 2)
            return w / (2 * k + 1) ** 2

        out = extrapolate_series(term, lead=1.5, prec=prec + 5)
        with working_precision(prec):
            value = pi_raw() / 2 * mpmath.log(2) - out.value
        return TValue(angle, round_to(value, prec), "mixed-binomial", out.terms_used, prec)
    c_float = math.cos(math.pi * float(frac))
    s_float = math.sin(math.pi * float(frac))
    ratio = max(c_float, s_float) ** 2
    terms_guess = _estimate_terms(ratio, prec + 12)
    with working_precision(prec, terms_guess) as dps:
        eps = mpf(10) ** (-dps)
        c = trig_raw(frac, "cos")
        s = trig_raw(frac, "sin")
        c2, s2 = c * c, s * s
        damp = 1 / (1 - max(c2, s2))
        w = mpf(1)  # C(2k,k)/4^k
        pc, ps = c, s
        total = mpf(0)
        k = 0
        while True:
            odd = 2 * k + 1
            term = w * (pc + ps) / (odd * odd)
            if term * damp < eps:
                break
            total += term
            w = w * odd / (2 * k + 2)
            pc *= c2
            ps *= s2
            k += 1
        x = pi_raw() * frac.numerator / frac.denominator
        value = x * mpmath.log(s / c) + pi_raw() / 2 * mpmath.log(2 * c) - total
    return TValue(angle, round_to(value, prec), "mixed-binomial", k, prec)


_AUX_DOMAIN = {"tan-power": QUARTER, "cos-harmonic": HALF, "mixed-binomial": HALF}


def t_aux_series(r: AngleLike, variant: AuxVariant, prec: int = 30) -> TValue:
    """One of the three auxiliary expansions of ``T(r)``.

    ``tan-power`` is valid on ``[0, 1/4]``; ``cos-harmonic`` and
    ``mixed-binomial`` on ``[0, 1/2]``.
    """
    if variant not in _AUX_DOMAIN:
        raise DomainError(f"unknown auxiliary variant {variant!r}")
    angle = as_angle(r)
    frac = angle.fraction
    if frac > _AUX_DOMAIN[variant]:
        raise DomainError(f"{variant} expansion needs r <= {_AUX_DOMAIN[variant]}, got {angle}")
    if frac == 0:
        return _zero(angle, variant, prec)
    if variant == "tan-power":
        return _tan_power(frac, prec)
    if variant == "cos-harmonic":
        return _cos_harmonic(frac, prec)
    return _mixed_binomial(frac, prec)


# --------------------------------------------------------------------------
# Quadrature oracle
# --------------------------------------------------------------------------


@lru_cache(maxsize=32)
def _gauss_legendre(n: int, dps: int) -> tuple[tuple[mpf, ...], tuple[mpf, ...]]:
    """Nodes and weights on ``[-1, 1]`` by Newton iteration on ``P_n`` (even ``n``)."""
    with mpmath.workdps(dps + 10):
        nodes, weights = [], []
        eps = mpf(10) ** (-dps - 5)
        for i in range(1, n // 2 + 1):
            x = mpmath.cos(mpmath.pi * (i - mpf(1) / 4) / (n + mpf(1) / 2))
            for _ in range(100):
                p0, p1 = mpf(1), x
                for j in range(2, n + 1):
                    p0, p1 = p1, ((2 * j - 1) * x * p1 - (j - 1) * p0) / j
                dp = n * (x * p1 - p0) / (x * x - 1)
                dx = p1 / dp
                x -= dx
                if abs(dx) < eps:
                    break
            w = 2 / ((1 - x * x) * dp * dp)
            nodes += [x, -x]
            weights += [w, w]
    return tuple(+v for v in nodes), tuple(+v for v in weights)


def _gl(f, a: mpf, b: mpf, n: int, dps: int) -> mpf:
    xs, ws = _gauss_legendre(n, dps)
    half = (b - a) / 2
    mid = (b + a) / 2
    return half * mpmath.fsum(w * f(mid + half * x) for x, w in zip(xs, ws))


def adaptive_gauss(f, a: mpf, b: mpf, eps: mpf, dps: int, n: int = 20, depth: int = 40) -> tuple[mpf, int]:
    """Adaptive bisection driven by the gap between ``n``- and ``2n``-point rules."""
    coarse = _gl(f, a, b, n, dps)
    fine = _gl(f, a, b, 2 * n, dps)
    if abs(fine - coarse) < eps or depth == 0:
        if depth == 0 and abs(fine - coarse) >= eps:
            raise PrecisionError("adaptive quadrature hit its subdivision limit")
        return fine, 3 * n
    mid = (a + b) / 2
    left, nl = adaptive_gauss(f, a, mid, eps / 2, dps, n, depth - 1)
    right, nr = adaptive_gauss(f, mid, b, eps / 2, dps, n, depth - 1)
    return left + right, nl + nr + 3 * n


def _xlogx_minus_x(x: mpf) -> mpf:
    return mpf(0) if x == 0 else x * mpmath.log(x) - x


def t_quadrature(r: AngleLike, prec: int = 20) -> TValue:
    """Numerical integral of ``log tan`` over ``[0, r pi]`` (``prec <= 30``).

    The integrand is split as ``log t - log(pi/2 - t) + h(t)`` with
    ``h(t) = log(tan(t) (pi/2 - t) / t)`` analytic on ``[0, pi/2]``; the two
    logarithms are integrated in closed form and ``h`` by adaptive
    Gauss-Legendre.
    """
    angle = as_angle(r)
    if prec > QUADRATURE_MAX_PREC:
        raise PrecisionError(f"quadrature oracle supports prec <= {QUADRATURE_MAX_PREC}")
    frac = angle.fraction
    if frac == 0:
        return _zero(angle, "quadrature", prec)
    with working_precision(prec) as dps:
        half_pi = pi_raw() / 2
        x = pi_raw() * frac.numerator / frac.denominator

        def h(t: mpf) -> mpf:
            return mpmath.log(mpmath.tan(t) * (half_pi - t) / t)

        smooth, evals = adaptive_gauss(h, mpf(0), x, mpf(10) ** (-prec - 3), dps)
        near_zero = _xlogx_minus_x(x)
        near_pole = _xlogx_minus_x(half_pi) - _xlogx_minus_x(half_pi - x)
        value = near_zero - near_pole + smooth
    return TValue(angle, round_to(value, prec), "quadrature", evals, prec)


# --------------------------------------------------------------------------
# Dispatcher
# --------------------------------------------------------------------------


def best_method(r: AngleLike) -> str:
    """Fastest geometric series for ``r``: sine-power vs cos-harmonic."""
    frac = as_angle(r).fraction
    if frac == 0 or frac == HALF:
        return "cos-harmonic"
    if frac > QUARTER:
        return "cos-harmonic"
    x = math.pi * float(frac)
    return "sine-power" if math.sin(2 * x) ** 2 <= math.cos(x) else "cos-harmonic"


@lru_cache(maxsize=4096)
def _t_value_cached(frac: Fraction, prec: int) -> TValue:
    method = best_method(frac)
    if method == "sine-power":
        return t_sine_series(frac, prec)
    return t_aux_series(frac, "cos-harmonic", prec)


def t_value(r: AngleLike, prec: int = 30) -> TValue:
    """``T(r)`` to ``prec`` digits by the fastest applicable geometric series.

    Does not use the reflection formula, so it can be used to test it.
    """
    return _t_value_cached(as_angle(r).fraction, prec)


def catalan_reference(prec: int) -> mpf:
    """Catalan's constant as ``-T(1/4)`` through the cos-harmonic expansion."""
    return -t_value(QUARTER, prec).value
