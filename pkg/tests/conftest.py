import numpy as np
import pytest

from cstar_sharp.ensembles import make_rng

# criterion id -> (passed, detail); filled in by test_acceptance.py
ACCEPTANCE = {}


@pytest.fixture
def rng(request):
    # one stream per test, keyed by the test name so reordering does not matter
    key = int.from_bytes(request.node.nodeid.encode()[-8:].rjust(8, b"\0"), "little")
    return make_rng(20240611, key)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for cid in sorted(ACCEPTANCE):
        passed, detail = ACCEPTANCE[cid]
        terminalreporter.write_line(f"[{'PASS' if passed else 'FAIL'}] criterion {cid}: {detail}")


def assert_close(a, b, atol):
    a = np.asarray(a)
    b = np.asarray(b)
    assert a.shape == b.shape
    err = float(np.max(np.abs(a - b), initial=0.0))
    assert err <= atol, f"max abs error {err:.3e} > {atol:.1e}"
