import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import cycle4, naive_violated
from flexcut.flex import (
    CutFamily,
    FlexParams,
    NotFlexConnected,
    enumerate_violated_cuts,
    is_flex_connected_cutwise,
    is_flex_connected_definitional,
)
from flexcut.generate import group_mask
from flexcut.graph import CutRecord, FlexGraph, PreconditionError

BOTH = (is_flex_connected_definitional, is_flex_connected_cutwise)


@pytest.mark.parametrize("check", BOTH)
def test_safe_cycle_is_2_3_flex(check, c4):
    assert check(c4, 2, 3)


@pytest.mark.parametrize("check", BOTH)
def test_cycle_with_unsafe_edge(check):
    G = cycle4(unsafe={0})
    verdict = check(G, FlexParams(2, 1))
    assert not verdict
    assert verdict.witness.removed == (0,)
    assert verdict.witness.side in (0b0001 ^ 0b1111, 0b0010)  # {1,2,3} or {1}
    assert verdict.witness.remaining == 1


@pytest.mark.parametrize("check", BOTH)
def test_g2(check, g2):
    assert check(g2, 3, 2)
    assert not check(g2, 3, 3)


@pytest.mark.parametrize("check", BOTH)
def test_single_edge(check):
    assert check(FlexGraph.from_edges(2, [(0, 1, 1, "S")]), 1, 3)
    assert not check(FlexGraph.from_edges(2, [(0, 1, 1, "U")]), 1, 1)


def test_params_validated():
    with pytest.raises(PreconditionError):
        FlexParams(0, 1)
    with pytest.raises(PreconditionError):
        FlexParams(2, 4)


def test_safe_cycle_has_no_violated_cuts(c4):
    assert len(enumerate_violated_cuts(c4, 2)) == 0


def test_g1_family_is_the_triangle_cut(g1):
    fam = enumerate_violated_cuts(g1, 2)
    assert fam.sides == [0b111000]
    assert fam.sides == naive_violated(g1, 2)
    rec = fam.cuts[0]
    assert (rec.size, rec.unsafe_count) == (4, 3)


def test_g3_family_contains_crossing_pair(g3):
    fam = enumerate_violated_cuts(g3, 3)
    assert group_mask(3, "xy") in fam and group_mask(3, "yz") in fam
    assert fam.sides == naive_violated(g3, 3)


def test_enumeration_requires_p2(g1):
    G = cycle4(unsafe={0, 1})
    with pytest.raises(NotFlexConnected) as info:
        enumerate_violated_cuts(G, 2)
    assert info.value.witness is not None


def test_family_container(g1):
    fam = enumerate_violated_cuts(g1, 2)
    assert [0, 1, 2] in fam and [3, 4, 5] in fam
    assert [0] not in fam and 0 not in fam
    assert fam.to_text().splitlines() == ["# family n=6 p=2 q=3 cuts=1", "3 4 5 | size=4 unsafe=3"]


def test_empty_family_text():
    assert CutFamily(4, (), 2, 3).to_text() == "# family n=4 p=2 q=3 cuts=0\n"


def test_family_rejects_non_canonical(g1):
    with pytest.raises(PreconditionError):
        CutFamily(6, (CutRecord(0b000111, (), 0, 0),))


def _random_graph(rng, n_max=6):
    n = rng.randint(2, n_max)
    edges = [(*rng.sample(range(n), 2), 1, rng.random() < 0.4) for _ in range(rng.randint(0, 14))]
    return FlexGraph.from_edges(n, edges)


@settings(max_examples=80, deadline=None)
@given(st.integers(0, 10**6), st.integers(1, 4), st.integers(0, 3))
def test_methods_agree(seed, p, q):
    G = _random_graph(random.Random(seed))
    assert bool(is_flex_connected_definitional(G, p, q)) == bool(is_flex_connected_cutwise(G, p, q))


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**6), st.integers(2, 4), st.integers(1, 3))
def test_monotone_in_p_and_q(seed, p, q):
    G = _random_graph(random.Random(seed))
    if is_flex_connected_cutwise(G, p, q):
        assert is_flex_connected_cutwise(G, p, q - 1)
        assert is_flex_connected_cutwise(G, p - 1, q)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**6), st.integers(1, 3), st.integers(0, 3))
def test_adding_an_edge_keeps_flex(seed, p, q):
    rng = random.Random(seed)
    G = _random_graph(rng)
    if G.vertex_count < 2 or not is_flex_connected_cutwise(G, p, q):
        return
    H = G.extended([(*rng.sample(range(G.vertex_count), 2), 1, rng.random() < 0.5)])
    assert is_flex_connected_cutwise(H, p, q)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6), st.integers(1, 3))
def test_violated_cuts_are_the_p3_failures(seed, p):
    G = _random_graph(random.Random(seed))
    if not is_flex_connected_cutwise(G, p, 2):
        return
    fam = enumerate_violated_cuts(G, p)
    assert fam.sides == naive_violated(G, p)
    assert bool(is_flex_connected_definitional(G, p, 3)) == (len(fam) == 0)
