import itertools

import pytest

from flexcut.generate import gadget_g1, gadget_g2, gadget_g3
from flexcut.graph import FlexGraph, Safety


def cycle4(unsafe=()):
    """The 4-cycle 0-1-2-3-0; edge i joins i and i+1 (mod 4)."""
    return FlexGraph.from_edges(4, [(i, (i + 1) % 4, 1, Safety.UNSAFE if i in unsafe else Safety.SAFE) for i in range(4)])


def naive_violated(G, p):
    """Violated sides by a plain loop over vertex subsets avoiding vertex 0."""
    out = []
    n = G.vertex_count
    for r in range(1, n):
        for S in itertools.combinations(range(1, n), r):
            S = set(S)
            b = [e for e in G.edges if (e.u in S) != (e.v in S)]
            if len(b) == p + 2 and sum(e.unsafe for e in b) >= 3:
                out.append(sum(1 << v for v in S))
    return sorted(out)


@pytest.fixture
def c4():
    return cycle4()


@pytest.fixture
def g1():
    return gadget_g1()


@pytest.fixture
def g2():
    return gadget_g2()


@pytest.fixture
def g3():
    return gadget_g3(3)


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
