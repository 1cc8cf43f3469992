"""PSLQ integer relation detection in binary fixed-point arithmetic.

All reals are Python ints scaled by ``2**bits``; this is several times faster
than going through ``mpf`` objects for the O(n^2) inner updates.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import mpmath
from mpmath import mpf

from .errors import PrecisionError


@dataclass(frozen=True)
class PSLQOutcome:
    """Either ``relation`` is set, or ``norm_bound`` certifies its absence.

    ``norm_bound`` is a lower bound on the Euclidean norm of any integer
    relation, valid when the run stopped.
    """

    relation: tuple[int, ...] | None
    norm_bound: float
    iterations: int


def _nint_div(a: int, b: int) -> int:
    """Nearest integer to ``a / b`` for ints (``b != 0``)."""
    q, r = divmod(a, b)
    if 2 * abs(r) >= abs(b):
        # round half away from the quotient toward nearest
        if (r > 0) == (b > 0):
            q += 1
    return q


def _as_float(v: int, bits: int) -> float:
    """``v / 2**bits`` as a float without overflowing on huge ``v``."""
    shift = max(0, v.bit_length() - 60)
    return math.ldexp(v >> shift, shift - bits)


def pslq_fixed(
    values: Sequence[mpf],
    digits: int,
    max_norm: int,
    max_iterations: int | None = None,
) -> PSLQOutcome:
    """Run PSLQ on ``values`` at ``digits`` decimal digits.

    Stops with a relation as soon as some entry of the reduced vector drops
    below ``10**(-digits*3/4)`` (relative), or with no relation once every
    relation is proved to have Euclidean norm above ``sqrt(n) * max_norm``.
    Raises :class:`PrecisionError` if the precision is exhausted first.
    """
    n = len(values)
    if n < 2:
        raise ValueError("need at least two values")
    bits = int(digits * 3.3219280948873626) + 8
    one = 1 << bits
    with mpmath.workprec(bits + 20):
        scale = max(abs(mpf(v)) for v in values)
        if scale == 0:
            raise ValueError("all values are zero")
        x = [int(mpmath.nint(mpf(v) / scale * one)) for v in values]
    if max_iterations is None:
        max_iterations = 200 * n * n + 2000
    tol = one >> int(bits * 0.75)
    target = math.sqrt(n) * max_norm

    # Partial norms s_k = sqrt(sum_{j>=k} x_j^2).
    s = [0] * n
    for k in range(n):
        s[k] = math.isqrt(sum(v * v for v in x[k:]))
    norm = s[0]
    y = [(v << bits) // norm for v in x]
    s = [(v << bits) // norm for v in s]
    if any(v == 0 for v in s[:-1]) or s[-1] == 0:
        raise PrecisionError("degenerate input: trailing values vanish at this precision")

    H = [[0] * (n - 1) for _ in range(n)]
    for i in range(n):
        for j in range(min(i + 1, n - 1)):
            if j == i:
                H[i][i] = (s[i + 1] << bits) // s[i]
            else:
                H[i][j] = -(((y[i] * y[j]) >> bits) << bits) // ((s[j] * s[j + 1]) >> bits)
    A = [[int(i == j) for j in range(n)] for i in range(n)]
    B = [[int(i == j) for j in range(n)] for i in range(n)]

    def reduce(rows: range, jmax) -> None:
        for i in rows:
            for j in range(jmax(i), -1, -1):
                hjj = H[j][j]
                if not hjj:
                    continue
                t = _nint_div(H[i][j], hjj)
                if not t:
                    continue
                y[j] += t * y[i]
                Hi, Hj = H[i], H[j]
                for k in range(j + 1):
                    Hi[k] -= t * Hj[k]
                Ai, Aj = A[i], A[j]
                for k in range(n):
                    Ai[k] -= t * Aj[k]
                    B[k][j] += t * B[k][i]

    reduce(range(1, n), lambda i: i - 1)

    gamma = math.sqrt(4.0 / 3.0) + 1e-3
    gpow = [gamma**i for i in range(n)]
    bound = 0.0
    # Entries of A beyond this size mean the fixed-point digits are used up.
    a_limit = 1 << (bits // 2)
    for it in range(1, max_iterations + 1):
        # Pick the row maximising gamma^i |H_ii|; compare in floating point.
        best, m = -1.0, 0
        for i in range(n - 1):
            val = gpow[i] * _as_float(abs(H[i][i]), bits)
            if val > best:
                best, m = val, i
        y[m], y[m + 1] = y[m + 1], y[m]
        H[m], H[m + 1] = H[m + 1], H[m]
        A[m], A[m + 1] = A[m + 1], A[m]
        for row in B:
            row[m], row[m + 1] = row[m + 1], row[m]
        if m <= n - 3:
            a, b = H[m][m], H[m][m + 1]
            t0 = math.isqrt(a * a + b * b)
            if t0 == 0:
                raise PrecisionError("PSLQ lost all precision (zero pivot)")
            t1 = (a << bits) // t0
            t2 = (b << bits) // t0
            for i in range(m, n):
                t3, t4 = H[i][m], H[i][m + 1]
                H[i][m] = (t1 * t3 + t2 * t4) >> bits
                H[i][m + 1] = (-t2 * t3 + t1 * t4) >> bits
        reduce(range(m + 1, n), lambda i: min(i - 1, m + 1))

        for i in range(n):
            if abs(y[i]) < tol:
                col = tuple(B[k][i] for k in range(n))
                if any(col):
                    return PSLQOutcome(col, bound, it)
        hmax = max(abs(H[j][j]) for j in range(n - 1))
        if hmax:
            bound = 1.0 / _as_float(hmax, bits)
            if bound > target:
                return PSLQOutcome(None, bound, it)
        if max(abs(v) for row in A for v in row) > a_limit:
            raise PrecisionError("PSLQ exhausted the working precision")
    raise PrecisionError(f"PSLQ did not terminate in {max_iterations} iterations")
