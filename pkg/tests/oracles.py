"""Independent reference computations for the test-suite.

Nothing here imports logtangent.  Most oracles use exact integer arithmetic;
the rest call mpmath routines that the library does not use for the same
quantity (Hurwitz zeta, tanh-sinh quadrature, mpmath.catalan, mpmath.pslq).
"""

from __future__ import annotations

import math
from fractions import Fraction

import mpmath
from mpmath import mpf


def _arctan_inv(x: int, scale: int) -> int:
    """``arctan(1/x) * scale`` by the alternating Taylor series, in integers."""
    total = term = scale // x
    x2 = x * x
    k = 1
    while term:
        term //= x2
        total += -(term // (2 * k + 1)) if k % 2 else term // (2 * k + 1)
        k += 1
    return total


def machin_pi(digits: int) -> mpf:
    """pi from Machin's formula with 10 guard digits."""
    scale = 10 ** (digits + 10)
    val = 16 * _arctan_inv(5, scale) - 4 * _arctan_inv(239, scale)
    with mpmath.workdps(digits + 10):
        return mpf(val) / scale


def sqrt_oracle(n: int | Fraction, digits: int) -> mpf:
    """``sqrt(n)`` by integer square root (Newton iteration in ``math.isqrt``)."""
    n = Fraction(n)
    scale = 10 ** (digits + 10)
    root = math.isqrt(n.numerator * scale * scale // n.denominator)
    with mpmath.workdps(digits + 10):
        return mpf(root) / scale


def log_arctanh(x: mpf, digits: int) -> mpf:
    """``log x = 2 artanh((x-1)/(x+1))`` by the power series, fixed-point integers."""
    scale = 10 ** (digits + 15)
    with mpmath.workdps(digits + 20):
        # halve the argument's log until u is small, then add the halvings back
        halvings = 0
        x = mpf(x)
        while abs(x - 1) > mpf("0.1"):
            x = mpmath.sqrt(x)
            halvings += 1
        u = int((x - 1) / (x + 1) * scale)
    u2 = u * u // scale
    total, power, k = 0, u, 0
    while power:
        total += power // (2 * k + 1)
        power = power * u2 // scale
        k += 1
    with mpmath.workdps(digits + 10):
        return mpf(2 * total) / scale * 2**halvings


def pascal_central(k: int) -> int:
    """``C(2k, k)`` from Pascal's triangle by repeated row addition."""
    row = [1]
    for _ in range(2 * k):
        row = [a + b for a, b in zip([0] + row, row + [0])]
    return row[k]


def catalan_oracle(digits: int) -> mpf:
    with mpmath.workdps(digits + 10):
        return +mpmath.catalan


def catalan_averaged(terms: int = 4000) -> float:
    """Alternating series for G with repeated averaging of partial sums."""
    partial = []
    s = 0.0
    for k in range(terms):
        s += (-1) ** k / (2 * k + 1) ** 2
        partial.append(s)
    for _ in range(20):
        partial = [(a + b) / 2 for a, b in zip(partial, partial[1:])]
    return partial[-1]


def dirichlet_l2(chi: dict[int, int], q: int, digits: int) -> mpf:
    """``L(2, chi) = q^-2 sum_a chi(a) zeta(2, a/q)`` via Hurwitz zeta."""
    with mpmath.workdps(digits + 10):
        return mpmath.fsum(c * mpmath.zeta(2, mpf(a) / q) for a, c in chi.items()) / q**2


CHI4 = {1: 1, 3: -1}
CHI6 = {1: 1, 5: -1}
CHI8 = {1: 1, 3: 1, 5: -1, 7: -1}


def t_tanh_sinh(r: Fraction, digits: int) -> mpf:
    """``T(r)`` by mpmath's tanh-sinh quadrature of ``log tan``."""
    with mpmath.workdps(digits + 10):
        x = mpmath.pi * r.numerator / r.denominator
        if r <= Fraction(1, 4):
            return mpmath.quad(lambda t: mpmath.log(mpmath.tan(t)), [0, x])
        # split at pi/4 so both endpoint singularities sit at interval ends
        return mpmath.quad(lambda t: mpmath.log(mpmath.tan(t)), [0, mpmath.pi / 4, x])


def signed_cos_power_sum(n: int, k: int, digits: int) -> mpf:
    """``F_n(k)`` with signs from Thm 7 (odd n) / Thm 8 (even n), via mpmath.cos."""
    with mpmath.workdps(digits + k // 3 + 10):
        total = mpf(0)
        for j in range(1, n + 1):
            sign = (-1) ** (n - j + 1) if n % 2 else (-1) ** j
            total += (sign * 2 * mpmath.cos(mpmath.pi * j / (2 * n + 1))) ** k
        return total


def lucas_fast(k: int) -> int:
    """Lucas number ``L(k) = F(k-1) + F(k+1)`` with Fibonacci fast doubling."""

    def fib(n: int) -> tuple[int, int]:
        if n == 0:
            return 0, 1
        a, b = fib(n // 2)
        c = a * (2 * b - a)
        d = a * a + b * b
        return (d, c + d) if n % 2 else (c, d)

    if k == 0:
        return 2
    f_prev = fib(k - 1)[0]
    f_next = fib(k + 1)[0]
    return f_prev + f_next


def tan_oracle(frac: Fraction, digits: int) -> mpf:
    """``tan(frac * pi)`` as ``sin/cos`` through mpmath.sin and mpmath.cos."""
    with mpmath.workdps(digits + 10):
        x = mpmath.pi * frac.numerator / frac.denominator
        return mpmath.sin(x) / mpmath.cos(x)
