import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from finsplit.topology import PointMap, build_space, discrete, indiscrete, sierpinski  # noqa: E402

import oracles  # noqa: E402


@pytest.fixture
def S2():
    return sierpinski()


@pytest.fixture
def D2():
    return discrete(2)


@pytest.fixture
def f_s2_d2(S2, D2):
    """f(a)=0, f(b)=1 from the Sierpiński space to D2."""
    return PointMap.from_labels(S2, D2, {"a": "0", "b": "1"})


@pytest.fixture
def g_d2_s2(S2, D2):
    return PointMap.from_labels(D2, S2, {"0": "a", "1": "b"})


@pytest.fixture
def T2():
    return indiscrete(2)


def paired_topologies(n):
    """Library spaces built from oracle-enumerated families, with the oracle space."""
    labels = [str(i) for i in range(n)]
    for osp in oracles.topologies(labels):
        yield build_space(labels, [sorted(o) for o in osp.opens]), osp


def as_dict(f):
    return dict(f.as_dict())


def pytest_terminal_summary(terminalreporter):
    import acceptance_log

    if acceptance_log.LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(acceptance_log.LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
