"""Richardson-type extrapolation for logarithmically convergent series.

Used only at the boundary points where the package's series lose geometric
convergence (``sin(2x) = 1`` in the sine-power expansion, ``sin x = 1`` in the
mixed binomial expansion).  There the summands have a full asymptotic
expansion ``k**(-lead-1) * (c0 + c1/k + ...)``, so by Euler-Maclaurin the
partial sums behave like ``S + sum_j d_j K**(-(lead + j))``.  Fitting that
model exactly through ``m`` partial sums eliminates the first ``m - 1``
correction terms.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import mpmath
from mpmath import mpf

from .errors import PrecisionError


@dataclass(frozen=True)
class Extrapolated:
    value: mpf
    error_estimate: mpf
    terms_used: int
    nodes: int


def _plan(prec: int) -> tuple[int, int, int]:
    nodes = math.ceil(prec / 2.4) + 4
    first = 100 + 4 * nodes
    step = 50 if prec <= 40 else 100
    return nodes, first, step


def _fit(points: list[tuple[int, mpf]], lead: mpf) -> mpf:
    m = len(points)
    a = mpmath.matrix(m, m)
    b = mpmath.matrix(m, 1)
    for i, (K, s) in enumerate(points):
        a[i, 0] = 1
        for j in range(1, m):
            a[i, j] = mpf(K) ** (-(lead + j - 1))
        b[i] = s
    return mpmath.lu_solve(a, b)[0]


def extrapolate_series(
    term: Callable[[int], mpf],
    lead: float,
    prec: int,
    max_prec: int = 120,
) -> Extrapolated:
    """Limit of ``sum_{k>=0} term(k)`` whose partial sums obey the model above.

    ``term`` is called for ``k = 0, 1, ...`` in order, at the precision in
    effect when this function is entered, and must return the k-th summand.
    ``lead`` is the exponent of the leading correction ``K**(-lead)``.
    """
    if prec > max_prec:
        raise PrecisionError(
            f"boundary extrapolation supports at most {max_prec} digits, requested {prec}"
        )
    nodes, first, step = _plan(prec)
    marks = [first + i * step for i in range(nodes)]
    dps = 2 * prec + 40
    with mpmath.workdps(dps):
        total = mpf(0)
        points: list[tuple[int, mpf]] = []
        wanted = iter(marks)
        target = next(wanted)
        k = 0
        while True:
            total += term(k)
            k += 1
            if k == target:
                points.append((k, +total))
                target = next(wanted, None)
                if target is None:
                    break
        lead_mp = mpf(lead)
        best = _fit(points, lead_mp)
        coarse = _fit(points[1:], lead_mp)
        err = abs(best - coarse)
    if err > mpf(10) ** (-prec - 2):
        raise PrecisionError(
            f"extrapolation did not settle to {prec} digits (estimate {mpmath.nstr(err, 3)})"
        )
    return Extrapolated(best, err, k, nodes)
