import numpy as np
import pytest


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def all_words(n):
    """Every n-bit word, MSB first, shape (2**n, n)."""
    return ((np.arange(2**n)[:, None] >> np.arange(n - 1, -1, -1)) & 1).astype(np.uint8)


# criterion id -> (ok, detail), filled by the acceptance checks
ACCEPTANCE = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for cid in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[cid]
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'} {cid}: {detail}")
