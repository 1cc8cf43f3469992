"""Exact certification that the tangents in ``u_n`` are algebraic units.

With ``t = tan x`` the integer polynomials ``p_k, q_k`` defined by::

    p_0 = 0, q_0 = 1,  p_{k+1} = p_k + t q_k,  q_{k+1} = q_k - t p_k

satisfy ``tan(kx) = p_k(t) / q_k(t)``.  For ``x = (2j-1) pi/(8n+4)`` one has
``tan((2n+1)x) = (-1)^(j+1)``, so ``t`` is a root of
``p_{2n+1} + (-1)^j q_{2n+1}``, whose leading and constant coefficients are
both ``+-1``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Literal

import mpmath
from mpmath import mpf

from .errors import CertificationError, DomainError
from .numkernel import RationalAngle, round_to, tolerance, trig_raw, working_precision
from .polynomial import IntPolynomial

__all__ = [
    "IntPolynomial",
    "TangentPair",
    "UnitCertificate",
    "certify_unit",
    "constant_term_step",
    "recurrence_step_identity",
    "tangent_pair",
    "unit_poly",
    "unit_product_check",
]

Sign = Literal["+", "-"]

_T = IntPolynomial((0, 1))


@dataclass(frozen=True)
class TangentPair:
    k: int
    p: IntPolynomial
    q: IntPolynomial

    def tan_multiple(self, t: mpf) -> mpf:
        """``p_k(t) / q_k(t)``, i.e. ``tan(kx)`` when ``t = tan x``."""
        return self.p(t) / self.q(t)


@lru_cache(maxsize=None)
def tangent_pair(k: int) -> TangentPair:
    """``(p_k, q_k)`` after ``k`` steps of the 2x2 polynomial recursion."""
    if k < 0:
        raise DomainError(f"k must be >= 0, got {k}")
    if k == 0:
        return TangentPair(0, IntPolynomial(), IntPolynomial((1,)))
    prev = tangent_pair(k - 1)
    return TangentPair(k, prev.p + _T * prev.q, prev.q - _T * prev.p)


def unit_poly(n: int, sign: Sign) -> IntPolynomial:
    """``p_{2n+1} + q_{2n+1}`` (``sign='+'``) or ``p_{2n+1} - q_{2n+1}``.

    Raises :class:`CertificationError` unless the degree is ``2n+1`` and the
    leading and constant coefficients are ``+-1``.
    """
    if n < 1:
        raise DomainError(f"n must be >= 1, got {n}")
    if sign not in ("+", "-"):
        raise DomainError(f"sign must be '+' or '-', got {sign!r}")
    pair = tangent_pair(2 * n + 1)
    poly = pair.p + pair.q if sign == "+" else pair.p - pair.q
    if poly.degree != 2 * n + 1:
        raise CertificationError(f"degree {poly.degree} != {2 * n + 1} for n={n}, sign {sign}")
    if abs(poly.leading) != 1 or abs(poly.constant) != 1:
        raise CertificationError(
            f"n={n}, sign {sign}: leading {poly.leading}, constant {poly.constant} not both +-1"
        )
    return poly


@dataclass(frozen=True)
class UnitCertificate:
    n: int
    j: int
    angle: RationalAngle
    sign: Sign
    polynomial: IntPolynomial
    leading: int
    constant: int
    residual: mpf
    threshold: mpf

    @property
    def passed(self) -> bool:
        return abs(self.leading) == 1 and abs(self.constant) == 1 and self.residual < self.threshold


def certify_unit(n: int, j: int, prec: int = 40) -> UnitCertificate:
    """Certificate that ``tan((2j-1) pi/(8n+4))`` is an algebraic unit.

    The sign is fixed by ``j`` (``tan((2n+1)x) = (-1)^(j+1)``); a root residual
    at or above ``10**(5-prec)`` raises :class:`CertificationError`.
    """
    if not 1 <= j <= n:
        raise DomainError(f"need 1 <= j <= n, got n={n}, j={j}")
    sign: Sign = "+" if j % 2 == 0 else "-"
    poly = unit_poly(n, sign)
    angle = RationalAngle(2 * j - 1, 8 * n + 4)
    # Horner cancels terms as large as the coefficient height.
    extra = len(str(poly.height())) + 2
    with working_precision(prec + extra, poly.degree):
        t = trig_raw(angle.fraction, "tan")
        residual = abs(poly(t))
    residual = round_to(residual, prec)
    threshold = tolerance(prec)
    cert = UnitCertificate(n, j, angle, sign, poly, poly.leading, poly.constant, residual, threshold)
    if not cert.passed:
        raise CertificationError(
            f"tan({angle} pi) is not a root of p_{2 * n + 1} {sign} q_{2 * n + 1} "
            f"(residual {mpmath.nstr(residual, 3)})"
        )
    return cert


def constant_term_step(k: int, sign: Sign) -> tuple[int, int]:
    """``((p_{k+2} +- q_{k+2})(0), (p_k +- q_k)(0))`` for odd ``k``."""
    a, b = tangent_pair(k + 2), tangent_pair(k)
    if sign == "+":
        return (a.p + a.q).constant, (b.p + b.q).constant
    return (a.p - a.q).constant, (b.p - b.q).constant


def recurrence_step_identity(k: int) -> bool:
    """Check the two-step forms of the recursion exactly for odd ``k``.

    ``p_{k+2} + q_{k+2} = (1-2t-t^2) p_k + (1+2t-t^2) q_k`` and
    ``p_{k+2} - q_{k+2} = (1+2t-t^2) p_k - (1-2t-t^2) q_k``.
    """
    minus = IntPolynomial((1, -2, -1))
    plus = IntPolynomial((1, 2, -1))
    a, b = tangent_pair(k + 2), tangent_pair(k)
    ok_sum = a.p + a.q == minus * b.p + plus * b.q
    ok_diff = a.p - a.q == plus * b.p - minus * b.q
    return ok_sum and ok_diff


def unit_product_check(n: int, prec: int = 40) -> tuple[mpf, list[UnitCertificate]]:
    """Certify every factor of ``u_n`` and rebuild ``u_n`` from the factors."""
    from .accel import accel_formula

    formula = accel_formula(n)
    certs = [certify_unit(n, j, prec) for j in range(1, n + 1)]
    with working_precision(prec, n):
        value = mpf(1)
        for (angle, expo), cert in zip(formula.unit_factors, certs):
            assert angle == cert.angle
            value *= trig_raw(angle.fraction, "tan") ** expo
    return round_to(value, prec), certs
