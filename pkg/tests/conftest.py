from collections import OrderedDict

import mpmath
import pytest

from pradius.problem import load_problem

# criterion number -> list of (ok, detail); filled by test_acceptance.py
ACCEPTANCE = OrderedDict()


@pytest.fixture
def jp_spec():
    return load_problem("jp-pair")


@pytest.fixture
def jp_pair(jp_spec):
    return jp_spec.matrix_tuple()


@pytest.fixture(autouse=True)
def _restore_mp_precision():
    prec = mpmath.mp.prec
    yield
    mpmath.mp.prec = prec


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(ACCEPTANCE):
        checks = ACCEPTANCE[number]
        ok = all(c[0] for c in checks)
        failed = [c[1] for c in checks if not c[0]]
        if failed:
            detail = f"{len(checks) - len(failed)}/{len(checks)} checks pass; failing: " + "; ".join(failed)
        else:
            detail = "; ".join(c[1] for c in checks)
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'} criterion {number}: {detail}")
