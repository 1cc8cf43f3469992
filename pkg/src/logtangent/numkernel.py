"""Arbitrary-precision arithmetic layer.

Every real quantity in the package is an :class:`mpmath.mpf` (aliased here as
``BigReal``).  Public functions take a precision in *decimal digits*, do their
work with extra guard digits and return a value rounded to that precision.
The documented error model is two units in the last requested digit; tests
only ever assert agreement within ``10**(5 - prec)``.
"""

from __future__ import annotations

import math
from contextlib import contextmanager
from dataclasses import dataclass
from fractions import Fraction
from functools import total_ordering
from typing import Iterator, Literal, Union

import mpmath
from mpmath import mpf

from .errors import DomainError, PoleError

BigReal = mpf

#: Base number of guard digits added to every internal computation.
GUARD_DIGITS = 10

TrigKind = Literal["sin", "cos", "tan"]
AngleLike = Union["RationalAngle", Fraction, int, str]


def guard_digits(terms: int = 1) -> int:
    """Guard digits for a computation that accumulates ``terms`` roundings."""
    return GUARD_DIGITS + max(0, math.ceil(math.log10(max(terms, 1))))


@contextmanager
def working_precision(prec: int, terms: int = 1) -> Iterator[int]:
    """Set mpmath's working precision to ``prec`` plus guard digits.

    Yields the number of decimal digits actually in effect.
    """
    if prec < 1:
        raise DomainError(f"precision must be positive, got {prec}")
    dps = prec + guard_digits(terms)
    with mpmath.workdps(dps):
        yield dps


def round_to(x: mpf, prec: int) -> mpf:
    """Round ``x`` to ``prec`` significant decimal digits.

    Rounding is decimal (``pi(1) == 3``); the result is stored with a few
    extra binary digits so the decimal value survives the round trip.
    """
    with mpmath.workdps(prec + 5):
        return mpf(mpmath.nstr(x, prec))


def tolerance(prec: int) -> mpf:
    """The package-wide agreement threshold ``10**(5 - prec)``."""
    return mpf(10) ** (5 - prec)


@total_ordering
@dataclass(frozen=True)
class RationalAngle:
    """A rational ``r = num/den`` in ``[0, 1/2]`` naming the angle ``r*pi``.

    Always stored in lowest terms.
    """

    num: int
    den: int = 1

    def __post_init__(self) -> None:
        if isinstance(self.num, bool) or isinstance(self.den, bool):
            raise DomainError("angle components must be integers")
        if self.den == 0:
            raise DomainError("angle denominator must be nonzero")
        frac = Fraction(int(self.num), int(self.den))
        if frac < 0 or frac > Fraction(1, 2):
            raise DomainError(f"angle {frac} outside [0, 1/2]")
        object.__setattr__(self, "num", frac.numerator)
        object.__setattr__(self, "den", frac.denominator)

    @classmethod
    def of(cls, value: AngleLike) -> "RationalAngle":
        if isinstance(value, RationalAngle):
            return value
        if isinstance(value, str):
            value = Fraction(value.strip())
        frac = Fraction(value)
        return cls(frac.numerator, frac.denominator)

    @property
    def fraction(self) -> Fraction:
        return Fraction(self.num, self.den)

    def __lt__(self, other: "RationalAngle") -> bool:
        if not isinstance(other, RationalAngle):
            return NotImplemented
        return self.fraction < other.fraction

    def __str__(self) -> str:
        if self.den == 1:
            return str(self.num)
        return f"{self.num}/{self.den}"

    def radians(self, prec: int) -> mpf:
        with working_precision(prec):
            value = pi_raw() * self.num / self.den
        return round_to(value, prec)


def as_angle(value: AngleLike) -> RationalAngle:
    return RationalAngle.of(value)


def pi_raw() -> mpf:
    """pi at the current mpmath working precision (no rounding step)."""
    return +mpmath.pi


def pi(prec: int) -> mpf:
    """pi correct to ``prec`` digits."""
    with working_precision(prec):
        value = pi_raw()
    return round_to(value, prec)


_EXACT = {
    ("sin", Fraction(0)): 0,
    ("sin", Fraction(1, 6)): Fraction(1, 2),
    ("sin", Fraction(1, 2)): 1,
    ("cos", Fraction(0)): 1,
    ("cos", Fraction(1, 3)): Fraction(1, 2),
    ("cos", Fraction(1, 2)): 0,
    ("tan", Fraction(0)): 0,
    ("tan", Fraction(1, 4)): 1,
}


def _reduced_sincos(frac: Fraction) -> tuple[mpf, mpf]:
    """(sin, cos) of ``frac*pi`` at the current working precision.

    The argument is first folded into ``[0, 1/4]`` using the quarter-turn
    symmetry so the series backend always works near the origin.
    """
    if frac > Fraction(1, 4):
        c, s = _reduced_sincos(Fraction(1, 2) - frac)
        return s, c
    x = mpf(frac.numerator) / frac.denominator
    return mpmath.sinpi(x), mpmath.cospi(x)


def trig_raw(frac: Fraction, kind: TrigKind) -> mpf:
    """sin/cos/tan of ``frac*pi`` for ``0 <= frac <= 1/2`` at working precision."""
    exact = _EXACT.get((kind, frac))
    if exact is not None:
        return mpf(exact.numerator) / exact.denominator if isinstance(exact, Fraction) else mpf(exact)
    if kind == "tan" and frac == Fraction(1, 2):
        raise PoleError("tan has a pole at pi/2")
    s, c = _reduced_sincos(frac)
    if kind == "sin":
        return s
    if kind == "cos":
        return c
    return s / c


def trig_at(angle: AngleLike, kind: TrigKind, prec: int) -> mpf:
    """Value of ``kind`` at ``angle*pi`` correct to ``prec`` digits.

    Exactly representable values (``tan(pi/4) = 1``, ``cos(pi/3) = 1/2``, ...)
    are returned exactly.
    """
    if kind not in ("sin", "cos", "tan"):
        raise DomainError(f"unknown trigonometric function {kind!r}")
    frac = as_angle(angle).fraction
    with working_precision(prec):
        value = trig_raw(frac, kind)
    return round_to(value, prec)


def log_big(x: mpf | int | Fraction, prec: int) -> mpf:
    """Natural logarithm correct to ``prec`` digits."""
    if isinstance(x, Fraction):
        if x <= 0:
            raise DomainError(f"log of nonpositive value {x}")
        with working_precision(prec):
            value = mpmath.log(mpf(x.numerator) / x.denominator)
        return round_to(value, prec)
    with working_precision(prec):
        x = mpf(x)
        if x <= 0:
            raise DomainError(f"log of nonpositive value {mpmath.nstr(x, 10)}")
        value = mpmath.log(x)
    return round_to(value, prec)


def central_binomial(k: int) -> int:
    """Exact ``C(2k, k)``."""
    if k < 0:
        raise DomainError(f"central binomial index must be >= 0, got {k}")
    return math.comb(2 * k, k)


def nearest_integer(x: mpf) -> tuple[int, mpf]:
    """Round ``x`` to the nearest integer and return ``(n, |x - n|)``.

    Exact: the result does not depend on mpmath's ambient precision.
    """
    x = mpf(x) if not isinstance(x, mpf) else x
    p, q = mpmath.libmp.to_rational(x._mpf_)
    exact = Fraction(int(p), int(q))
    n = round(exact)
    diff = abs(exact - n)
    with mpmath.workdps(30):
        return n, mpf(diff.numerator) / diff.denominator
