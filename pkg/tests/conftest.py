from fractions import Fraction as F

import pytest

from locc_convert.birkhoff import decomposition_from_pairs
from locc_convert.core import Permutation, WeightVector

ALPHA = (F(2, 5), F(1, 4), F(7, 20))
BETA = (F(3, 5), F(3, 10), F(1, 10))
EQ4 = (
    (F(1, 3), F(2, 3), F(0)),
    (F(1, 6), F(1, 3), F(1, 2)),
    (F(1, 2), F(0), F(1, 2)),
)
SWAP12 = Permutation.from_cycles(3, (1, 2))
IDENT3 = Permutation.identity(3)
CYC132 = Permutation.from_cycles(3, (1, 3, 2))


def wv(*xs):
    return WeightVector(tuple(F(x) for x in xs))


@pytest.fixture
def alpha():
    return WeightVector(ALPHA)


@pytest.fixture
def beta():
    return WeightVector(BETA)


@pytest.fixture
def eq4():
    return EQ4


@pytest.fixture
def paper_decomposition():
    return decomposition_from_pairs([(F(1, 6), SWAP12), (F(1, 3), IDENT3), (F(1, 2), CYC132)])


def brute_force_majorizes(beta, alpha):
    """Prefix-sum comparison written out literally on freshly sorted copies."""
    b = sorted(beta, reverse=True)
    a = sorted(alpha, reverse=True)
    if sum(b) != sum(a):
        return False
    for k in range(1, len(b) + 1):
        if sum(b[:k]) < sum(a[:k]):
            return False
    return True


def pytest_terminal_summary(terminalreporter):
    lines = []
    for outcome in ("passed", "failed", "error"):
        for rep in terminalreporter.stats.get(outcome, []):
            if "test_acceptance.py" in getattr(rep, "nodeid", "") and rep.when == "call":
                lines.append((rep.nodeid.split("::")[-1], outcome))
    if lines:
        terminalreporter.section("acceptance criteria")
        for name, outcome in sorted(lines):
            terminalreporter.write_line(f"{'PASS' if outcome == 'passed' else 'FAIL'}  {name}")
