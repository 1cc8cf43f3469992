"""Exact transformation algebra on the log tangent integral.

Identities are kept as :class:`SignedTSum` objects with exact rational
coefficients; numbers only appear when a sum is evaluated.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable

import mpmath
from mpmath import mpf

from .errors import DomainError, PoleError
from .logtan import t_value
from .numkernel import AngleLike, RationalAngle, as_angle, pi_raw, round_to, working_precision

HALF = Fraction(1, 2)
QUARTER = Fraction(1, 4)

Evaluator = Callable[[RationalAngle, int], mpf]


def reflect(r: AngleLike) -> RationalAngle:
    """``1/2 - r``; the log tangent integral takes the same value at both."""
    return RationalAngle.of(HALF - as_angle(r).fraction)


def canonical(r: AngleLike) -> RationalAngle:
    """Representative of ``{r, 1/2 - r}`` lying in ``[0, 1/4]``."""
    angle = as_angle(r)
    return angle if angle.fraction <= QUARTER else reflect(angle)


def _default_evaluator(angle: RationalAngle, prec: int) -> mpf:
    return t_value(angle, prec).value


@dataclass(frozen=True)
class SignedTSum:
    """``sum coef * T(angle)`` with exact rational coefficients.

    Duplicate angles are merged and zero coefficients dropped.  ``T(0)``
    vanishes identically, so angle ``0`` is dropped as well.
    """

    terms: tuple[tuple[Fraction, RationalAngle], ...] = ()

    @classmethod
    def build(cls, pairs: Iterable[tuple[Fraction | int, AngleLike]]) -> "SignedTSum":
        acc: dict[RationalAngle, Fraction] = {}
        for coef, angle in pairs:
            a = as_angle(angle)
            acc[a] = acc.get(a, Fraction(0)) + Fraction(coef)
        terms = tuple(
            (c, a) for a, c in sorted(acc.items()) if c != 0 and a.num != 0
        )
        return cls(terms)

    def __add__(self, other: "SignedTSum") -> "SignedTSum":
        return SignedTSum.build(self.terms + other.terms)

    def __sub__(self, other: "SignedTSum") -> "SignedTSum":
        return self + other.scale(-1)

    def scale(self, factor: Fraction | int) -> "SignedTSum":
        return SignedTSum.build((Fraction(factor) * c, a) for c, a in self.terms)

    def normalized(self) -> "SignedTSum":
        """Every angle replaced by its reflection representative in ``[0, 1/4]``."""
        return SignedTSum.build((c, canonical(a)) for c, a in self.terms)

    def coefficient(self, angle: AngleLike) -> Fraction:
        a = as_angle(angle)
        for c, b in self.terms:
            if b == a:
                return c
        return Fraction(0)

    @property
    def angles(self) -> tuple[RationalAngle, ...]:
        return tuple(a for _, a in self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def evaluate(self, prec: int, evaluator: Evaluator | None = None) -> mpf:
        """Numerical value, each ``T`` computed at ``prec`` plus guard digits."""
        evaluator = evaluator or _default_evaluator
        inner = prec + 10
        with working_precision(prec, len(self.terms)):
            total = mpf(0)
            for coef, angle in self.terms:
                total += evaluator(angle, inner) * coef.numerator / coef.denominator
        return round_to(total, prec)

    def __str__(self) -> str:
        return format_terms(self.terms)


def format_terms(terms: Iterable[tuple[Fraction, RationalAngle]]) -> str:
    parts = []
    for coef, angle in terms:
        mag = abs(coef)
        body = f"T({angle})" if mag == 1 else f"{mag} T({angle})"
        if not parts:
            parts.append(body if coef > 0 else f"-{body}")
        else:
            parts.append(f"+ {body}" if coef > 0 else f"- {body}")
    return " ".join(parts) if parts else "0"


def multiplication_rhs(m: int, r: AngleLike, normalize: bool = True) -> SignedTSum:
    """Right side of ``T(mr) = m sum_{j=0}^n T(j/m + r) - m sum_{j=1}^n T(j/m - r)``.

    ``m = 2n + 1`` must be odd and at least 3, with ``0 <= r <= 1/(2m)``.
    With ``normalize`` (the default) the angles are reflected into ``[0, 1/4]``.
    """
    if m < 3 or m % 2 == 0:
        raise DomainError(f"multiplier must be odd and >= 3, got {m}")
    angle = as_angle(r)
    frac = angle.fraction
    if frac > Fraction(1, 2 * m):
        raise DomainError(f"multiplication formula needs r <= 1/(2m) = 1/{2 * m}, got {angle}")
    n = (m - 1) // 2
    pairs: list[tuple[Fraction, Fraction]] = [(Fraction(m), Fraction(j, m) + frac) for j in range(n + 1)]
    pairs += [(Fraction(-m), Fraction(j, m) - frac) for j in range(1, n + 1)]
    out = SignedTSum.build(pairs)
    return out.normalized() if normalize else out


def multiplication_relation(m: int, r: AngleLike, normalize: bool = True) -> SignedTSum:
    """``T(mr) - rhs``, a signed sum that vanishes identically."""
    lhs = SignedTSum.build([(1, as_angle(r).fraction * m)])
    if normalize:
        lhs = lhs.normalized()
    return lhs - multiplication_rhs(m, r, normalize)


def lemma1_residual(m: int, x: mpf | float | str, prec: int) -> mpf:
    """``|tan(mx)/tan(x) - prod_j tan(j pi/m + x) tan(j pi/m - x)|``.

    ``m`` is an odd positive integer.  For ``m = 1`` both sides equal ``1``.
    """
    if m < 1 or m % 2 == 0:
        raise DomainError(f"tangent product needs odd m >= 1, got {m}")
    n = (m - 1) // 2
    with working_precision(prec, 2 * n + 2) as dps:
        x = mpf(x)
        near = mpf(10) ** (-dps // 2)
        if abs(mpmath.sin(x)) < near:
            raise PoleError("tan(x) vanishes; the quotient is undefined")
        args = [m * x] + [pi_raw() * j / m + s * x for j in range(1, n + 1) for s in (1, -1)]
        if any(abs(mpmath.cos(a)) < near for a in args):
            raise PoleError("a tangent factor has a pole at this x")
        lhs = mpmath.tan(m * x) / mpmath.tan(x)
        rhs = mpf(1)
        for a in args[1:]:
            rhs *= mpmath.tan(a)
        diff = abs(lhs - rhs)
    return round_to(diff, prec)


def alt_decomposition(n: int) -> SignedTSum:
    """Alternating expression of ``G = -T(1/4)`` through ``T((2j-1)/(8n+4))``.

    Odd ``n``: ``(2n+1)/(n+1) sum_j (-1)^j T(...)``.
    Even ``n``: ``(2n+1)/n sum_j (-1)^(j+1) T(...)``.
    """
    if n < 1:
        raise DomainError(f"decomposition index must be >= 1, got {n}")
    if n % 2:
        weight = Fraction(2 * n + 1, n + 1)
        signs = [(-1) ** j for j in range(1, n + 1)]
    else:
        weight = Fraction(2 * n + 1, n)
        signs = [(-1) ** (j + 1) for j in range(1, n + 1)]
    return SignedTSum.build(
        (weight * s, Fraction(2 * j - 1, 8 * n + 4)) for j, s in zip(range(1, n + 1), signs)
    )


def alt_decomposition_relation(n: int) -> SignedTSum:
    """``T(1/4) + decomposition``; vanishes because the decomposition equals ``-T(1/4)``."""
    return SignedTSum.build([(1, QUARTER)]) + alt_decomposition(n)
