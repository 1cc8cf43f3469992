"""Series acceleration formulas for Catalan's constant.

For every ``n >= 1``::

    G = a_n * pi * log(u_n) - b_n * sum_k F_n(2k+1) / ((2k+1)^2 C(2k,k))

with ``a_n = 1/(4n+4)``, ``b_n = (2n+1)/(4n+4)`` for odd ``n`` and
``a_n = 1/(4n)``, ``b_n = (2n+1)/(4n)`` for even ``n``.  ``F_n(k)`` is a power
sum of the signed numbers ``+-2cos(j pi/(2n+1))`` and ``u_n`` is a product of
tangents at ``(2j-1) pi/(8n+4)``.  The summand decays like ``(rho_n^2/4)^k``
with ``rho_n = 2cos(pi/(2n+1))``.

``F_n`` is produced by its integer linear recurrence; the direct power sum
``f_direct`` is only the validation oracle.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Iterator, Literal

import mpmath
from mpmath import mpf

from .errors import DomainError, PrecisionError
from ._extrapolate import extrapolate_series
from .numkernel import (
    RationalAngle,
    nearest_integer,
    pi_raw,
    round_to,
    trig_raw,
    working_precision,
)
from .polynomial import IntPolynomial
from .transforms import alt_decomposition

Parity = Literal["odd", "even"]
AuxName = Literal["chi4-slow", "chi6", "chi8"]

#: Precision cap for the logarithmically convergent chi4 series.
SLOW_MAX_PREC = 40


def parity_of(n: int) -> Parity:
    return "odd" if n % 2 else "even"


def _check(n: int, parity: Parity | None) -> Parity:
    if n < 1:
        raise DomainError(f"n must be >= 1, got {n}")
    actual = parity_of(n)
    if parity is not None and parity != actual:
        raise DomainError(f"parity mismatch: n={n} is {actual}, not {parity}")
    return actual


def root_sign(n: int, j: int) -> int:
    """Sign attached to ``2cos(j pi/(2n+1))`` in ``F_n``."""
    return (-1) ** (n - j + 1) if n % 2 else (-1) ** j


def signed_roots_raw(n: int) -> list[mpf]:
    """The ``n`` signed roots at the current working precision."""
    return [root_sign(n, j) * 2 * trig_raw(Fraction(j, 2 * n + 1), "cos") for j in range(1, n + 1)]


def dominant_root(n: int) -> float:
    """``rho_n = 2cos(pi/(2n+1))``, the largest root magnitude."""
    return 2.0 * math.cos(math.pi / (2 * n + 1))


def limiting_ratio(n: int) -> float:
    """Limit of the ratio of consecutive summands, ``rho_n**2 / 4``."""
    return dominant_root(n) ** 2 / 4.0


def f_direct(n: int, parity: Parity | None, k: int, prec: int) -> mpf:
    """``F_n(k)`` as the direct signed-cosine power sum at ``prec`` digits."""
    _check(n, parity)
    if k < 0:
        raise DomainError(f"k must be >= 0, got {k}")
    # |F_n(k)| <= n 2^k, so absolute accuracy needs k*log10(2) extra digits.
    extra = int(k * 0.30103) + 1
    with working_precision(prec + extra, n):
        value = mpmath.fsum(s**k for s in signed_roots_raw(n))
    with mpmath.workdps(prec + extra):
        return +value


@dataclass(frozen=True)
class RecurrenceSeq:
    """An integer sequence defined by a monic characteristic polynomial."""

    char_poly: IntPolynomial
    initial_terms: tuple[int, ...]
    rounding_residual: mpf = field(default=mpf(0), compare=False)

    @property
    def order(self) -> int:
        return self.char_poly.degree

    def iterate(self) -> Iterator[int]:
        """Yield the terms ``F(0), F(1), ...`` exactly and indefinitely."""
        c = self.char_poly.coefficients[:-1]
        window = list(self.initial_terms)
        yield from window
        while True:
            nxt = -sum(ci * wi for ci, wi in zip(c, window))
            yield nxt
            window = window[1:] + [nxt]

    def terms(self, count: int) -> list[int]:
        out = []
        for i, v in zip(range(count), self.iterate()):
            out.append(v)
        return out

    def __getitem__(self, k: int) -> int:
        if k < 0:
            raise IndexError(k)
        return self.terms(k + 1)[k]


def _poly_from_roots(roots: list[mpf]) -> list[mpf]:
    coeffs = [mpf(1)]
    for r in roots:
        nxt = [mpf(0)] * (len(coeffs) + 1)
        for i, c in enumerate(coeffs):
            nxt[i + 1] += c
            nxt[i] -= r * c
        coeffs = nxt
    return coeffs


@lru_cache(maxsize=128)
def f_recurrence(n: int, parity: Parity | None = None, prec: int = 60) -> RecurrenceSeq:
    """Characteristic polynomial ``prod_j (x - sigma_j)`` with integer coefficients.

    Coefficients are expanded numerically and rounded; a rounding residual of
    ``10**(-prec/2)`` or more means ``prec`` is too small.
    """
    _check(n, parity)
    with working_precision(prec, n * n):
        roots = signed_roots_raw(n)
        numeric = _poly_from_roots(roots)
        worst = mpf(0)
        coeffs = []
        for c in numeric:
            v, res = nearest_integer(c)
            worst = max(worst, res)
            coeffs.append(v)
    limit = mpf(10) ** (-(prec // 2))
    if worst >= limit:
        raise PrecisionError(
            f"characteristic polynomial for n={n} not integral at {prec} digits "
            f"(residual {mpmath.nstr(worst, 3)})"
        )
    initial = []
    for k in range(n):
        v, res = nearest_integer(f_direct(n, None, k, prec))
        if res >= limit:
            raise PrecisionError(f"F_{n}({k}) not integral at {prec} digits")
        initial.append(v)
    return RecurrenceSeq(IntPolynomial(tuple(coeffs)), tuple(initial), worst)


@dataclass(frozen=True)
class AccelFormula:
    n: int
    parity: Parity
    prefactor_log: Fraction
    prefactor_sum: Fraction
    unit_factors: tuple[tuple[RationalAngle, int], ...]

    @property
    def recurrence(self) -> RecurrenceSeq:
        return f_recurrence(self.n)

    @property
    def rho(self) -> float:
        return dominant_root(self.n)


def accel_formula(n: int) -> AccelFormula:
    parity = _check(n, None)
    if parity == "odd":
        pre_log = Fraction(1, 4 * n + 4)
        pre_sum = Fraction(2 * n + 1, 4 * n + 4)
        expo = [(2 * j - 1) * (-1) ** j for j in range(1, n + 1)]
    else:
        pre_log = Fraction(1, 4 * n)
        pre_sum = Fraction(2 * n + 1, 4 * n)
        expo = [(2 * j - 1) * (-1) ** (j + 1) for j in range(1, n + 1)]
    factors = tuple(
        (RationalAngle(2 * j - 1, 8 * n + 4), e) for j, e in zip(range(1, n + 1), expo)
    )
    return AccelFormula(n, parity, pre_log, pre_sum, factors)


def formula_from_decomposition(n: int) -> tuple[tuple[Fraction, ...], tuple[Fraction, ...]]:
    """Log and series weights obtained by expanding the alternating decomposition.

    Substituting the sine-power expansion into ``G = sum_j w_j T(r_j)`` gives
    ``pi * sum_j w_j r_j log tan(r_j pi)`` and ``-1/4 sum_j w_j (series at r_j)``.
    Returns ``(w_j r_j, -w_j/4)`` for ``j = 1..n`` as exact rationals.
    """
    decomposition = alt_decomposition(n)
    log_w = []
    sum_w = []
    for j in range(1, n + 1):
        angle = RationalAngle(2 * j - 1, 8 * n + 4)
        w = decomposition.coefficient(angle)
        log_w.append(w * angle.fraction)
        sum_w.append(-w / 4)
    return tuple(log_w), tuple(sum_w)


@dataclass(frozen=True)
class UnitValue:
    value: mpf
    log_value: mpf
    factors: tuple[tuple[RationalAngle, int], ...]


def unit_log_raw(n: int) -> mpf:
    """``log u_n`` at the current working precision, from its tangent factors."""
    return mpmath.fsum(e * mpmath.log(trig_raw(a.fraction, "tan")) for a, e in accel_formula(n).unit_factors)


def unit_value(n: int, parity: Parity | None = None, prec: int = 30) -> UnitValue:
    """The algebraic unit ``u_n`` together with its factorisation."""
    _check(n, parity)
    formula = accel_formula(n)
    with working_precision(prec, n):
        value = mpf(1)
        for a, e in formula.unit_factors:
            value *= trig_raw(a.fraction, "tan") ** e
        log_value = unit_log_raw(n)
    return UnitValue(round_to(value, prec), round_to(log_value, prec), formula.unit_factors)


def lucas_radical_raw() -> mpf:
    """``(10 + sqrt(50 - 22 sqrt 5)) / (10 - sqrt(50 - 22 sqrt 5))``."""
    inner = mpmath.sqrt(50 - 22 * mpmath.sqrt(5))
    return (10 + inner) / (10 - inner)


def denest_residual(prec: int) -> mpf:
    """``|tan(pi/20)/tan^3(3pi/20) - lucas radical|`` at ``prec`` digits."""
    with working_precision(prec):
        lhs = trig_raw(Fraction(1, 20), "tan") / trig_raw(Fraction(3, 20), "tan") ** 3
        diff = abs(lhs - lucas_radical_raw())
    return round_to(diff, prec)


@dataclass(frozen=True)
class SeriesRun:
    value: mpf
    terms_used: int
    prec: int


def _damped_sum(seq: Iterator[int], rho: float, count: int, eps: mpf) -> tuple[mpf, int]:
    """``sum_k seq_k / ((2k+1)^2 C(2k,k))`` while the tail bound exceeds ``eps``.

    ``seq_k`` must satisfy ``|seq_k| <= count * rho^(2k+1)``.  Each later summand
    is smaller by a factor below ``rho^2/4``, hence the geometric tail bound.
    """
    inv_c = mpf(1)  # 1 / C(2k, k)
    rho2 = mpf(rho) ** 2
    damp = count / (1 - rho2 / 4)
    power = mpf(rho)
    total = mpf(0)
    k = 0
    for value in seq:
        odd = 2 * k + 1
        scale = inv_c / (odd * odd)
        if power * scale * damp < eps:
            return total, k
        total += mpf(value) * scale
        inv_c = inv_c * (k + 1) / (2 * odd)
        power *= rho2
        k += 1
    raise AssertionError("unreachable: sequence is infinite")


def _odd_terms(rec: RecurrenceSeq) -> Iterator[int]:
    it = rec.iterate()
    next(it)
    for value in it:
        yield value
        next(it)


def terms_needed(n: int, digits: int) -> int:
    """Summands required by the tail bound for ``digits`` correct digits."""
    rho = dominant_root(n)
    ratio = rho * rho / 4
    # log10 of n rho^(2k+1) / ((2k+1)^2 C(2k,k) (1 - ratio))
    k = 0
    while True:
        lg = (
            math.log10(n)
            + (2 * k + 1) * math.log10(rho)
            - 2 * math.log10(2 * k + 1)
            - _log10_central_binomial(k)
            - math.log10(1 - ratio)
        )
        if lg < -digits:
            return k
        k += 1


def _log10_central_binomial(k: int) -> float:
    return (math.lgamma(2 * k + 1) - 2 * math.lgamma(k + 1)) / math.log(10)


def catalan_accel_run(n: int, prec: int) -> SeriesRun:
    formula = accel_formula(n)
    rec = f_recurrence(n, prec=max(60, 4 * n + 40))
    rho = dominant_root(n) * (1 + 1e-12)
    estimate = terms_needed(n, prec + 12)
    with working_precision(prec, estimate) as dps:
        series, terms = _damped_sum(_odd_terms(rec), rho, n, mpf(10) ** (-dps))
        pre_log = formula.prefactor_log
        pre_sum = formula.prefactor_sum
        value = (
            pi_raw() * unit_log_raw(n) * pre_log.numerator / pre_log.denominator
            - series * pre_sum.numerator / pre_sum.denominator
        )
    return SeriesRun(round_to(value, prec), terms, prec)


def catalan_accel(n: int, prec: int) -> mpf:
    """Catalan's constant to ``prec`` digits through the ``n``-th formula."""
    return catalan_accel_run(n, prec).value


def lucas_numbers() -> Iterator[int]:
    """``L(0), L(1), ... = 2, 1, 3, 4, 7, 11, ...``."""
    a, b = 2, 1
    while True:
        yield a
        a, b = b, a + b


def _odd_lucas() -> Iterator[int]:
    it = lucas_numbers()
    next(it)
    for value in it:
        yield value
        next(it)


def catalan_lucas_run(prec: int) -> SeriesRun:
    rho = dominant_root(2) * (1 + 1e-12)
    estimate = terms_needed(2, prec + 12)
    with working_precision(prec, estimate) as dps:
        series, terms = _damped_sum(_odd_lucas(), rho, 2, mpf(10) ** (-dps))
        value = pi_raw() / 8 * mpmath.log(lucas_radical_raw()) + series * 5 / 8
    return SeriesRun(round_to(value, prec), terms, prec)


def catalan_lucas(prec: int) -> mpf:
    """Catalan's constant through the Lucas-number formula."""
    return catalan_lucas_run(prec).value


# --------------------------------------------------------------------------
# Denesting feasibility
# --------------------------------------------------------------------------


def _is_square(v: int) -> bool:
    return v >= 0 and math.isqrt(v) ** 2 == v


def _squarefree(c: int) -> bool:
    if c <= 0:
        return False
    d = 2
    while d * d <= c:
        if c % (d * d) == 0:
            return False
        d += 1
    return True


@dataclass(frozen=True)
class DenestVerdict:
    a: int
    b: int
    c: int
    norm_value: int
    norm_square: bool
    cross_value: int
    cross_square: bool
    denestable: bool
    degenerate: str | None = None

    def describe(self) -> str:
        expr = f"sqrt({self.a} {'+' if self.b >= 0 else '-'} {abs(self.b)} sqrt({self.c}))"
        lines = [
            f"{expr}:",
            f"  a^2 - c b^2 = {self.norm_value} ({'square' if self.norm_square else 'not a square'})",
            f"  b^2 c^2 - a^2 c = {self.cross_value} ({'square' if self.cross_square else 'not a square'})",
        ]
        if self.degenerate:
            lines.append(f"  degenerate: {self.degenerate}")
        lines.append(f"  denestable over Q: {'yes' if self.denestable else 'no'}")
        return "\n".join(lines)


def denest_feasibility(a: int, b: int, c: int) -> DenestVerdict:
    """Rational-square criteria for denesting ``sqrt(a + b sqrt(c))``.

    Both quantities ``a^2 - c b^2`` and ``b^2 c^2 - a^2 c`` are reported; the
    radical denests over the rationals when either is a perfect square.  The
    cases ``b = 0``, ``a = 0`` and ``c = 1`` are reported as degenerate.
    """
    if not _squarefree(c):
        raise DomainError(f"c must be a positive squarefree integer, got {c}")
    norm = a * a - c * b * b
    cross = b * b * c * c - a * a * c
    norm_sq, cross_sq = _is_square(norm), _is_square(cross)
    degenerate = None
    denestable = norm_sq or cross_sq
    if c == 1:
        degenerate = "c = 1: sqrt(c) is rational, nothing is nested"
        denestable = False
    elif b == 0:
        degenerate = "b = 0: sqrt(a) has no inner radical"
        denestable = False
    elif a == 0:
        degenerate = "a = 0: the radical is sqrt(b) * c^(1/4), a pure fourth root with no square-root denesting"
        denestable = False
    return DenestVerdict(a, b, c, norm, norm_sq, cross, cross_sq, denestable, degenerate)


# --------------------------------------------------------------------------
# Auxiliary Dirichlet L-values
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class AuxRun:
    which: str
    value: mpf
    terms_used: int
    deceleration: bool
    prec: int


def _binomial_power_sum(base: int, eps: mpf) -> tuple[mpf, int]:
    """``sum base^k / ((2k+1)^2 C(2k,k))`` for ``base < 4``, ratio below ``base/4``."""
    damp = 1 / (1 - mpf(base) / 4)
    w = mpf(1)  # base^k / C(2k,k)
    total = mpf(0)
    k = 0
    while True:
        odd = 2 * k + 1
        term = w / (odd * odd)
        if term * damp < eps:
            return total, k
        total += term
        w = w * base * (k + 1) / (2 * odd)
        k += 1


def aux_lvalue_run(which: AuxName, prec: int) -> AuxRun:
    if which == "chi4-slow":
        if prec > SLOW_MAX_PREC:
            raise PrecisionError(f"chi4-slow is capped at {SLOW_MAX_PREC} digits (k^(-3/2) convergence)")
        state = {"w": mpf(1)}

        def term(k: int) -> mpf:
            w = state["w"]
            odd = 2 * k + 1
            state["w"] = w * 4 * (k + 1) / (2 * odd)
            return w / (odd * odd)

        out = extrapolate_series(term, lead=0.5, prec=prec + 5)
        with working_precision(prec):
            value = out.value / 2
        return AuxRun(which, round_to(value, prec), out.terms_used, True, prec)
    if which not in ("chi6", "chi8"):
        raise DomainError(f"unknown L-value {which!r}")
    base = 3 if which == "chi6" else 2
    estimate = int((prec + 12) / math.log10(4 / base)) + 2
    with working_precision(prec, estimate) as dps:
        series, terms = _binomial_power_sum(base, mpf(10) ** (-dps))
        if which == "chi6":
            closed = pi_raw() * mpmath.sqrt(3) / 18 * mpmath.log(3)
        else:
            closed = pi_raw() * mpmath.sqrt(2) / 8 * mpmath.log(1 + mpmath.sqrt(2))
        value = closed + series / 2
    return AuxRun(which, round_to(value, prec), terms, False, prec)


def aux_lvalue(which: AuxName, prec: int) -> mpf:
    """``L(2, chi4)`` (slow series), ``L(2, chi6)`` or ``L(2, chi8)``."""
    return aux_lvalue_run(which, prec).value


def slow_terms_bound(digits: int) -> float:
    """Terms direct summation of the chi4 series would need for ``digits`` digits.

    Uses ``4^k / C(2k,k) <= sqrt(pi (k + 1/2))``, so the tail of
    ``1/2 sum 4^k/((2k+1)^2 C(2k,k))`` from ``K`` is at most
    ``1/2 sqrt(pi/2) (2K - 1)^(-1/2)``.
    """
    return ((math.pi / 8) * 10.0 ** (2 * digits) + 1) / 2


# --------------------------------------------------------------------------
# Convergence diagnostics
# --------------------------------------------------------------------------


def summand_ratio(n: int, k: int) -> float:
    """``|s_{k+1} / s_k|`` for ``s_k = F_n(2k+1) / ((2k+1)^2 C(2k,k))``, exact inputs."""
    rec = f_recurrence(n)
    values = rec.terms(2 * k + 4)
    a, b = values[2 * k + 1], values[2 * k + 3]
    ratio = Fraction(b, a) * Fraction(k + 1, 2 * (2 * k + 1)) * Fraction((2 * k + 1) ** 2, (2 * k + 3) ** 2)
    return abs(float(ratio))


def digits_per_term(n: int, k: int) -> float:
    return -math.log10(summand_ratio(n, k))
