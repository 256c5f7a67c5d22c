import os

import pytest

from ludus import _jit

_ACCEPTANCE = {}


@pytest.fixture(params=[False, True], ids=["numpy", "numba"])
def jit(request):
    """Run a test once per kernel backend; skips numba when it is disabled."""
    if request.param and not _jit.USE_NUMBA:
        pytest.skip("numba disabled")
    return request.param


def pytest_runtest_logreport(report):
    if "test_acceptance.py" not in report.nodeid:
        return
    name = report.nodeid.rsplit("::", 1)[-1]
    if report.when == "call" or (report.when == "setup" and not report.passed):
        _ACCEPTANCE[name] = "PASS" if report.passed else "FAIL"


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for name in sorted(_ACCEPTANCE):
        num = int(name[len("test_ac"):len("test_ac") + 2])
        label = name[len("test_acNN_"):].replace("_", " ")
        tr.write_line(f"[{_ACCEPTANCE[name]}] #{num:>2} {label}")
    backend = "numpy" if not _jit.USE_NUMBA else "numba"
    tr.write_line(f"kernel backend: {backend} (LUDUS_DISABLE_NUMBA={os.environ.get('LUDUS_DISABLE_NUMBA', '')!r})")
