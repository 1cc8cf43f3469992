import os
import subprocess
import sys

import numpy as np
import pytest

from logtangent import _kernels
from logtangent.logtan import fourier_period_table
from logtangent.numkernel import RationalAngle


def reference_sum(period, n_terms):
    # plain float loop, smallest terms last; fine for the small n used here
    return sum(period[k % len(period)] / (2 * k + 1) ** 2 for k in range(n_terms))


@pytest.mark.parametrize("angle", [RationalAngle(1, 8), RationalAngle(2, 7), RationalAngle(1, 4)])
def test_numpy_matches_reference(angle):
    period = fourier_period_table(angle)
    assert _kernels.fourier_sum(period, 20000, "numpy") == pytest.approx(reference_sum(period, 20000), abs=1e-14)


@pytest.mark.skipif(not _kernels.HAVE_NUMBA, reason="numba not installed")
@pytest.mark.parametrize("n_terms", [1, 7, 3_000_001])
def test_backends_agree(n_terms):
    period = fourier_period_table(RationalAngle(3, 11))
    a = _kernels.fourier_sum(period, n_terms, "numba")
    b = _kernels.fourier_sum(period, n_terms, "numpy")
    assert abs(a - b) < 1e-15


def test_unknown_backend():
    with pytest.raises(ValueError):
        _kernels.fourier_sum(np.ones(3), 10, "fortran")


def test_env_flag_selects_numpy():
    code = "from logtangent import _kernels; print(_kernels.HAVE_NUMBA)"
    env = dict(os.environ, LOGTANGENT_DISABLE_NUMBA="1")
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "False"
