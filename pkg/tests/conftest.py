import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from boilrange.dataset import TargetKind, generate_synthetic  # noqa: E402

IBP = TargetKind.INITIAL_BOILING_POINT
FBP = TargetKind.FINAL_BOILING_POINT


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture(scope="session")
def synthetic22():
    return generate_synthetic(22, 1)


@pytest.fixture(scope="session")
def affine22():
    return generate_synthetic(22, 3, kind="affine")


ACCEPTANCE = []


def pytest_runtest_logreport(report):
    if report.when == "call" and "test_acceptance.py" in report.nodeid:
        name = report.nodeid.split("::")[-1]
        ACCEPTANCE.append((name, report.outcome.upper(), report.duration))


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for name, outcome, duration in ACCEPTANCE:
            terminalreporter.write_line(f"{'PASS' if outcome == 'PASSED' else 'FAIL'}  {name}  ({duration:.2f}s)")
