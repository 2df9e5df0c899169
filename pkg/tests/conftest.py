import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from oracles import RefField  # noqa: E402
from pluckerdss.field import GF  # noqa: E402

# (q, b) pairs exercised by the randomized property tests.
GRID_Q = (2, 3, 4, 5)
GRID_B = (3, 4, 5, 6)
GRID = [(q, b) for q in GRID_Q for b in GRID_B]

ROOT = Path(__file__).resolve().parents[1]


def ref_for(F):
    return RefField(F.p, F.m, F.modulus)


def fields(*qs):
    return [pytest.param(GF(q), id=f"gf{q}") for q in qs]


@pytest.fixture
def rng():
    return np.random.default_rng(20260101)


_ACCEPTANCE = {}


def pytest_runtest_logreport(report):
    if "test_acceptance.py" in report.nodeid and report.when == "call":
        name = report.nodeid.split("::")[-1]
        _ACCEPTANCE[name] = report.outcome
    elif "test_acceptance.py" in report.nodeid and report.when == "setup" and report.outcome != "passed":
        _ACCEPTANCE[report.nodeid.split("::")[-1]] = report.outcome


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for name in sorted(_ACCEPTANCE):
        status = "PASS" if _ACCEPTANCE[name] == "passed" else "FAIL"
        terminalreporter.write_line(f"{status}  {name}")
