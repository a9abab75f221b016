import os
import sys

import numpy as np
import pytest

sys.path.insert(0, os.path.dirname(__file__))

from boolnl.circuit import parse  # noqa: E402
from boolnl.truth_table import TruthTable  # noqa: E402


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def and2():
    return TruthTable.from_text("0001", 2)


@pytest.fixture
def xor2():
    return TruthTable.from_text("0110", 2)


@pytest.fixture
def and2_circuit():
    return parse("INPUTS 2\nw3 = AND w1 w2\nOUTPUT w3\n")


@pytest.fixture
def xor2_circuit():
    return parse("INPUTS 2\nw3 = XOR w1 w2\nOUTPUT w3\n")


def pytest_addoption(parser):
    parser.addoption("--runslow", action="store_true", help="run tests marked slow")


def pytest_collection_modifyitems(config, items):
    if config.getoption("--runslow"):
        return
    skip = pytest.mark.skip(reason="slow; pass --runslow")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip)


# one line per acceptance criterion, filled in by test_acceptance.py
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
