"""Float64 summation kernels for the slowly convergent Fourier series.

The Fourier expansion of the log tangent integral converges like ``1/k**2``,
so a tolerance of ``1e-10`` already needs billions of terms.  For a rational
angle ``p/q`` the numerators ``sin((4k+2) p pi / q)`` repeat with period
dividing ``q``; the kernels take that period table and only do the
``1/(2k+1)**2`` part per term.

Two interchangeable backends exist: a numba ``@njit`` loop and a chunked
pure-numpy path.  Set ``LOGTANGENT_DISABLE_NUMBA=1`` (or run without numba
installed) to force the numpy path.
"""

from __future__ import annotations

import os

import numpy as np

_CHUNK = 1 << 20


def _numba_disabled() -> bool:
    return os.environ.get("LOGTANGENT_DISABLE_NUMBA", "").strip().lower() in {"1", "true", "yes", "on"}


try:
    if _numba_disabled():
        raise ImportError("numba disabled by environment")
    from numba import njit
except ImportError:
    njit = None


def fourier_sum_numpy(period: np.ndarray, n_terms: int) -> float:
    """``sum_{k < n_terms} period[k % P] / (2k+1)**2`` with numpy chunks.

    Chunk sums use numpy's pairwise summation; the chunk totals are
    accumulated with Neumaier compensation, in increasing ``k`` order.
    """
    p = period.shape[0]
    total = 0.0
    comp = 0.0
    for start in range(0, n_terms, _CHUNK):
        stop = min(start + _CHUNK, n_terms)
        k = np.arange(start, stop, dtype=np.int64)
        odd = (2 * k + 1).astype(np.float64)
        part = float(np.sum(period[k % p] / (odd * odd)))
        t = total + part
        if abs(total) >= abs(part):
            comp += (total - t) + part
        else:
            comp += (part - t) + total
        total = t
    return total + comp


if njit is not None:

    @njit(cache=True)
    def _fourier_sum_jit(period, n_terms):  # pragma: no cover - compiled
        p = period.shape[0]
        total = 0.0
        comp = 0.0
        idx = 0
        for k in range(n_terms):
            odd = 2.0 * k + 1.0
            term = period[idx] / (odd * odd)
            t = total + term
            if abs(total) >= abs(term):
                comp += (total - t) + term
            else:
                comp += (term - t) + total
            total = t
            idx += 1
            if idx == p:
                idx = 0
        return total + comp

    def fourier_sum_numba(period: np.ndarray, n_terms: int) -> float:
        return float(_fourier_sum_jit(np.ascontiguousarray(period, dtype=np.float64), np.int64(n_terms)))

    HAVE_NUMBA = True
else:
    fourier_sum_numba = None
    HAVE_NUMBA = False


def fourier_sum(period: np.ndarray, n_terms: int, backend: str | None = None) -> float:
    """Dispatch to the requested backend (``"numba"``, ``"numpy"`` or auto)."""
    if backend is None:
        backend = "numba" if HAVE_NUMBA else "numpy"
    if backend == "numba":
        if fourier_sum_numba is None:
            raise RuntimeError("numba backend requested but unavailable")
        return fourier_sum_numba(period, n_terms)
    if backend == "numpy":
        return fourier_sum_numpy(np.asarray(period, dtype=np.float64), n_terms)
    raise ValueError(f"unknown backend {backend!r}")
