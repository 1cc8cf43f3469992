import sys

import mpmath
import pytest


@pytest.fixture(autouse=True)
def _high_precision_arithmetic():
    # Library results carry their own precision, but mpf arithmetic inside a
    # test runs at the ambient dps; keep it well above any tolerance checked.
    with mpmath.workdps(1100):
        yield


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if not mod or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(mod.RESULTS):
        terminalreporter.write_line(mod.RESULTS[num])
