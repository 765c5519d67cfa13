"""(p, q)-flex-connectivity checks and enumeration of violated cuts."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Iterator

import numpy as np

from .graph import (
    CutRecord,
    FlexGraph,
    PreconditionError,
    as_mask,
    canonical,
    cut_edge_set,
    cut_profile,
    members,
    min_cut_maxflow,
)


@dataclass(frozen=True)
class FlexParams:
    p: int
    q: int

    def __post_init__(self):
        if self.p < 1:
            raise PreconditionError("p must be at least 1")
        if not 0 <= self.q <= 3:
            raise PreconditionError("q must lie in [0, 3]")


@dataclass(frozen=True)
class FlexWitness:
    """A failing scenario: deleting ``removed`` leaves ``side`` with ``remaining`` < p edges."""

    removed: tuple[int, ...]
    side: int
    remaining: int


@dataclass(frozen=True)
class FlexVerdict:
    ok: bool
    witness: FlexWitness | None = None

    def __bool__(self) -> bool:
        return self.ok


class NotFlexConnected(PreconditionError):
    def __init__(self, message: str, witness: FlexWitness):
        super().__init__(message)
        self.witness = witness


@dataclass(frozen=True)
class CutFamily:
    """Violated cuts keyed by canonical side, sorted by side."""

    n: int
    cuts: tuple[CutRecord, ...] = ()
    p: int | None = None
    q: int | None = None
    _index: dict = field(default=None, init=False, repr=False, compare=False)

    def __post_init__(self):
        seen = {}
        for i, c in enumerate(self.cuts):
            if c.side != canonical(c.side, self.n) or not 0 < c.side < (1 << self.n) - 1:
                raise PreconditionError(f"cut side {c.side:#x} is not canonical and proper")
            if c.side in seen:
                raise PreconditionError(f"duplicate cut side {members(c.side)}")
            seen[c.side] = i
        if list(seen) != sorted(seen):
            raise PreconditionError("family must be sorted by canonical side")
        object.__setattr__(self, "_index", seen)

    @classmethod
    def from_sides(cls, G: FlexGraph, sides: Iterable, p=None, q=None) -> "CutFamily":
        canon = sorted({canonical(as_mask(s), G.vertex_count) for s in sides})
        return cls(G.vertex_count, tuple(cut_edge_set(G, s) for s in canon), p, q)

    @property
    def sides(self) -> list[int]:
        return [c.side for c in self.cuts]

    def __len__(self) -> int:
        return len(self.cuts)

    def __iter__(self) -> Iterator[CutRecord]:
        return iter(self.cuts)

    def __contains__(self, S) -> bool:
        mask = as_mask(S)
        if not 0 < mask < (1 << self.n) - 1:
            return False
        return canonical(mask, self.n) in self._index

    def subfamily(self, sides: Iterable[int]) -> "CutFamily":
        keep = set(sides)
        return CutFamily(self.n, tuple(c for c in self.cuts if c.side in keep), self.p, self.q)

    def to_text(self) -> str:
        head = f"# family n={self.n} p={self.p} q={self.q} cuts={len(self.cuts)}"
        rows = [
            f"{' '.join(map(str, c.vertices))} | size={c.size} unsafe={c.unsafe_count}"
            for c in self.cuts
        ]
        return "\n".join([head, *rows]) + "\n"


def _as_params(params, q=None) -> FlexParams:
    if isinstance(params, FlexParams):
        return params
    return FlexParams(int(params), int(q))


def is_flex_connected_definitional(G: FlexGraph, params, q: int | None = None) -> FlexVerdict:
    """Delete every admissible unsafe set and test p-edge-connectivity by max-flow.

    Deleting more edges can only lower connectivity, so the sets of the
    largest admissible size ``min(q, |U|)`` are the only ones tried.
    """
    params = _as_params(params, q)
    if G.vertex_count == 1:
        return FlexVerdict(True)
    unsafe = G.unsafe_ids
    r = min(params.q, len(unsafe))
    for removed in itertools.combinations(unsafe, r):
        value, side = min_cut_maxflow(G, removed)
        if value < params.p:
            return FlexVerdict(False, FlexWitness(tuple(removed), side, value))
    return FlexVerdict(True)


def cut_slack(G: FlexGraph, q: int, ignored: Iterable[int] = ()):
    """Profile plus worst-case remaining size ``size - min(q, unsafe)`` of every cut."""
    prof = cut_profile(G, ignored)
    return prof, prof.size - np.minimum(prof.unsafe, q)


def is_flex_connected_cutwise(G: FlexGraph, params, q: int | None = None) -> FlexVerdict:
    params = _as_params(params, q)
    if G.vertex_count == 1:
        return FlexVerdict(True)
    prof, slack = cut_slack(G, params.q)
    bad = np.flatnonzero(slack < params.p)
    if bad.size == 0:
        return FlexVerdict(True)
    i = int(bad[np.argmin(slack[bad])])
    side = int(prof.sides[i])
    rec = cut_edge_set(G, side)
    removed = tuple([e for e in rec.boundary if G.edges[e].unsafe][: params.q])
    return FlexVerdict(False, FlexWitness(removed, side, int(slack[i])))


def enumerate_violated_cuts(G: FlexGraph, p: int) -> CutFamily:
    """All cuts of exactly p+2 edges with at least 3 unsafe ones.

    ``G`` must be (p, 2)-flex-connected; those are then exactly the cuts that
    make it fail (p, 3)-flex-connectivity.
    """
    if G.vertex_count == 1:
        return CutFamily(1, (), p, 3)
    prof, slack = cut_slack(G, 2)
    bad = np.flatnonzero(slack < p)
    if bad.size:
        side = int(prof.sides[bad[0]])
        raise NotFlexConnected(
            f"graph is not ({p},2)-flex-connected; cut {members(side)} fails",
            FlexWitness((), side, int(slack[bad[0]])),
        )
    keep = (prof.size == p + 2) & (prof.unsafe >= 3)
    sides = sorted(prof.select(keep))
    return CutFamily(G.vertex_count, tuple(cut_edge_set(G, s) for s in sides), p, 3)
