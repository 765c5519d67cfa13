"""Multigraphs with safe/unsafe edges, cuts, and edge connectivity.

Vertex subsets are plain ``int`` bit masks (bit ``i`` set means vertex ``i``
is in the set).  A cut is stored by its canonical side, the side that does
not contain vertex 0, so ``S`` and ``V - S`` share one representation.
"""

from __future__ import annotations

import enum
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

import networkx as nx
import numpy as np

MAX_VERTICES = 64
MAX_EXHAUSTIVE = 26  # 2**25 canonical sides is the most we sweep in memory chunks
_CHUNK_BITS = 18


class GraphFormatError(ValueError):
    """Raised when a graph document cannot be parsed."""

    def __init__(self, line: int, message: str):
        super().__init__(f"line {line}: {message}")
        self.line = line


class PreconditionError(ValueError):
    """An operation was called with arguments outside its contract."""


class Safety(str, enum.Enum):
    SAFE = "S"
    UNSAFE = "U"


@dataclass(frozen=True)
class Edge:
    id: int
    u: int
    v: int
    cost: Fraction
    safety: Safety = Safety.SAFE

    @property
    def unsafe(self) -> bool:
        return self.safety is Safety.UNSAFE

    def crosses(self, mask: int) -> bool:
        return ((mask >> self.u) ^ (mask >> self.v)) & 1 == 1


@dataclass(frozen=True)
class FlexGraph:
    vertex_count: int
    edges: tuple[Edge, ...] = ()

    def __post_init__(self):
        if not 1 <= self.vertex_count <= MAX_VERTICES:
            raise PreconditionError(f"vertex_count must lie in [1, {MAX_VERTICES}]")
        for i, e in enumerate(self.edges):
            if e.id != i:
                raise PreconditionError(f"edge ids must be dense, got {e.id} at position {i}")
            if not (0 <= e.u < self.vertex_count and 0 <= e.v < self.vertex_count):
                raise PreconditionError(f"edge {e.id} endpoint out of range")
            if e.u == e.v:
                raise PreconditionError(f"edge {e.id} is a self-loop")
            if e.cost < 0:
                raise PreconditionError(f"edge {e.id} has negative cost")

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[Sequence]) -> "FlexGraph":
        """Build from ``(u, v[, cost[, safety]])`` tuples; ids follow input order.

        ``safety`` may be a :class:`Safety`, ``"S"``/``"U"`` or a bool meaning unsafe.
        """
        out = []
        for i, spec in enumerate(edges):
            u, v, *rest = spec
            cost = Fraction(rest[0]) if rest else Fraction(1)
            safety = _coerce_safety(rest[1]) if len(rest) > 1 else Safety.SAFE
            out.append(Edge(i, int(u), int(v), cost, safety))
        return cls(n, tuple(out))

    @property
    def m(self) -> int:
        return len(self.edges)

    @property
    def full_mask(self) -> int:
        return (1 << self.vertex_count) - 1

    @property
    def unsafe_ids(self) -> list[int]:
        return [e.id for e in self.edges if e.unsafe]

    def cost_of(self, ids: Iterable[int]) -> Fraction:
        return sum((self.edges[i].cost for i in ids), Fraction(0))

    def restrict(self, ids: Iterable[int]) -> tuple["FlexGraph", list[int]]:
        """Subgraph on the given edge ids, renumbered densely.

        Returns the subgraph and the list mapping new ids to original ids.
        """
        keep = sorted(set(ids))
        sub = FlexGraph(
            self.vertex_count,
            tuple(
                Edge(j, self.edges[i].u, self.edges[i].v, self.edges[i].cost, self.edges[i].safety)
                for j, i in enumerate(keep)
            ),
        )
        return sub, keep

    def extended(self, extra: Iterable[Sequence]) -> "FlexGraph":
        """A copy with ``extra`` edges appended after the existing ones."""
        specs = [(e.u, e.v, e.cost, e.safety) for e in self.edges]
        specs.extend(extra)
        return FlexGraph.from_edges(self.vertex_count, specs)


def _coerce_safety(value) -> Safety:
    if isinstance(value, Safety):
        return value
    if isinstance(value, bool):
        return Safety.UNSAFE if value else Safety.SAFE
    return Safety(str(value).upper())


# ---------------------------------------------------------------------------
# vertex-set helpers


def as_mask(vertices) -> int:
    if isinstance(vertices, (int, np.integer)):
        return int(vertices)
    mask = 0
    for v in vertices:
        mask |= 1 << int(v)
    return mask


def members(mask: int) -> list[int]:
    out = []
    i = 0
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return out


def canonical(mask: int, n: int) -> int:
    """The side of the cut that excludes vertex 0."""
    return ((1 << n) - 1) ^ mask if mask & 1 else mask


def is_proper(mask: int, n: int) -> bool:
    return 0 < mask < (1 << n) - 1


def _check_side(G: FlexGraph, mask: int, name: str = "S") -> None:
    if mask >> G.vertex_count:
        raise PreconditionError(f"{name} contains vertices outside the graph")
    if not is_proper(mask, G.vertex_count):
        raise PreconditionError(f"{name} must be a nonempty proper vertex subset")


# ---------------------------------------------------------------------------
# cuts


@dataclass(frozen=True)
class CutRecord:
    side: int
    boundary: tuple[int, ...]
    size: int
    unsafe_count: int

    @property
    def vertices(self) -> list[int]:
        return members(self.side)


def cut_edge_set(G: FlexGraph, S, ignored: Iterable[int] = ()) -> CutRecord:
    mask = as_mask(S)
    _check_side(G, mask)
    skip = set(ignored)
    boundary = tuple(e.id for e in G.edges if e.id not in skip and e.crosses(mask))
    unsafe = sum(1 for i in boundary if G.edges[i].unsafe)
    return CutRecord(canonical(mask, G.vertex_count), boundary, len(boundary), unsafe)


def between_edge_set(G: FlexGraph, A, B) -> list[int]:
    a, b = as_mask(A), as_mask(B)
    if a & b:
        raise PreconditionError("A and B must be disjoint")
    return [
        e.id
        for e in G.edges
        if ((a >> e.u) & 1 and (b >> e.v) & 1) or ((b >> e.u) & 1 and (a >> e.v) & 1)
    ]


@dataclass
class CutProfile:
    """Boundary statistics of every canonical side of a graph.

    ``sides[i]`` is a canonical mask; ``size[i]`` and ``unsafe[i]`` count its
    boundary edges.  Produced by one vectorized sweep over all ``2**(n-1) - 1``
    canonical sides.
    """

    n: int
    sides: np.ndarray
    size: np.ndarray
    unsafe: np.ndarray

    def select(self, keep: np.ndarray) -> list[int]:
        return [int(s) for s in self.sides[keep]]


def cut_profile(G: FlexGraph, ignored: Iterable[int] = ()) -> CutProfile:
    n = G.vertex_count
    if n > MAX_EXHAUSTIVE:
        raise PreconditionError(f"exhaustive cut sweep limited to n <= {MAX_EXHAUSTIVE}")
    skip = set(ignored)
    # aggregate parallel edges: (u, v) -> [multiplicity, unsafe multiplicity]
    pairs: dict[tuple[int, int], list[int]] = {}
    for e in G.edges:
        if e.id in skip:
            continue
        key = (min(e.u, e.v), max(e.u, e.v))
        rec = pairs.setdefault(key, [0, 0])
        rec[0] += 1
        rec[1] += e.unsafe
    total = 1 << (n - 1)
    sides = np.arange(1, total, dtype=np.int64) << 1
    size = np.zeros(sides.shape, dtype=np.int32)
    unsafe = np.zeros(sides.shape, dtype=np.int32)
    step = 1 << _CHUNK_BITS
    for lo in range(0, sides.size, step):
        chunk = sides[lo : lo + step]
        s_view = size[lo : lo + step]
        u_view = unsafe[lo : lo + step]
        for (u, v), (mult, bad) in pairs.items():
            crossing = (((chunk >> u) ^ (chunk >> v)) & 1).astype(np.int32)
            s_view += mult * crossing
            if bad:
                u_view += bad * crossing
    return CutProfile(n, sides, size, unsafe)


# ---------------------------------------------------------------------------
# edge connectivity


def _flow_graph(G: FlexGraph, ignored: Iterable[int]) -> nx.Graph:
    skip = set(ignored)
    H = nx.Graph()
    H.add_nodes_from(range(G.vertex_count))
    for e in G.edges:
        if e.id in skip:
            continue
        if H.has_edge(e.u, e.v):
            H[e.u][e.v]["capacity"] += 1
        else:
            H.add_edge(e.u, e.v, capacity=1)
    return H


def min_cut_maxflow(G: FlexGraph, ignored: Iterable[int] = ()) -> tuple[int, int]:
    """Global minimum cut as the smallest vertex-0-to-t max flow.

    Returns ``(value, canonical side)``; for a single vertex ``(inf, 0)`` is
    replaced by ``(0, 0)`` since there are no cuts.
    """
    n = G.vertex_count
    if n == 1:
        return 0, 0
    H = _flow_graph(G, ignored)
    best_value, best_side = None, 0
    for t in range(1, n):
        value, (reach, _) = nx.minimum_cut(H, 0, t)
        if best_value is None or value < best_value:
            best_value = value
            best_side = canonical(as_mask(reach), n)
    return int(best_value), best_side


def edge_connectivity_at_least(
    G: FlexGraph, k: int, ignored: Iterable[int] = (), method: str | None = None
) -> bool:
    """True iff every cut keeps at least ``k`` edges once ``ignored`` is deleted.

    ``method`` is ``"exhaustive"``, ``"maxflow"`` or ``"both"`` (default for
    n <= 20, otherwise max-flow).  With ``"both"`` the two answers must agree.
    """
    if k < 0:
        raise PreconditionError("k must be nonnegative")
    if k == 0 or G.vertex_count == 1:
        return True
    ignored = frozenset(ignored)
    if method is None:
        method = "both" if G.vertex_count <= 20 else "maxflow"
    answers = []
    if method in ("exhaustive", "both"):
        prof = cut_profile(G, ignored)
        answers.append(bool(prof.size.min() >= k))
    if method in ("maxflow", "both"):
        answers.append(min_cut_maxflow(G, ignored)[0] >= k)
    if not answers:
        raise PreconditionError(f"unknown method {method!r}")
    if len(set(answers)) != 1:
        raise RuntimeError("exhaustive and max-flow connectivity disagree")
    return answers[0]


# ---------------------------------------------------------------------------
# multiset identities


IDENTITY_NAMES = ("a", "b", "c", "d", "e", "f")


@dataclass
class IdentityResult:
    name: str
    passed: bool
    difference: dict[int, int] = field(default_factory=dict)


@dataclass
class IdentityReport:
    results: list[IdentityResult]

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.results)

    @property
    def failures(self) -> list[str]:
        return [r.name for r in self.results if not r.passed]

    def to_text(self) -> str:
        lines = []
        for r in self.results:
            if r.passed:
                lines.append(f"{r.name} pass")
            else:
                diff = " ".join(f"{k}:{v:+d}" for k, v in sorted(r.difference.items()))
                lines.append(f"{r.name} fail {diff}")
        return "\n".join(lines) + "\n"


def _delta(G: FlexGraph, mask: int) -> Counter:
    return Counter(e.id for e in G.edges if e.crosses(mask))


def _between(G: FlexGraph, a: int, b: int) -> Counter:
    return Counter(between_edge_set(G, a, b))


def _twice(c: Counter) -> Counter:
    return Counter({k: 2 * v for k, v in c.items()})


def check_multiset_identities(G: FlexGraph, A, B) -> IdentityReport:
    a, b = as_mask(A), as_mask(B)
    _check_side(G, a, "A")
    _check_side(G, b, "B")
    full = G.full_mask
    a_only, b_only, both, neither = a & ~b, b & ~a, a & b, full & ~(a | b)
    dA, dB = _delta(G, a), _delta(G, b)
    sides = {
        "a": (dA + dB, _delta(G, a | b) + _delta(G, both) + _twice(_between(G, a_only, b_only))),
        "b": (dA + dB, _delta(G, a_only) + _delta(G, b_only) + _twice(_between(G, neither, both))),
        "c": (dA + _twice(_between(G, a_only, both)), _delta(G, a_only) + _delta(G, both)),
        "d": (dB + _twice(_between(G, b_only, both)), _delta(G, b_only) + _delta(G, both)),
        "e": (dA + _twice(_between(G, b_only, neither)), _delta(G, b_only) + _delta(G, a | b)),
        "f": (dB + _twice(_between(G, a_only, neither)), _delta(G, a_only) + _delta(G, a | b)),
    }
    results = []
    for name in IDENTITY_NAMES:
        lhs, rhs = sides[name]
        diff = {k: lhs[k] - rhs[k] for k in set(lhs) | set(rhs) if lhs[k] != rhs[k]}
        results.append(IdentityResult(name, not diff, diff))
    return IdentityReport(results)


def identity_sweep(G: FlexGraph) -> dict[str, int]:
    """Failure counts of identities (a)-(f) over every ordered pair of nonempty proper subsets.

    Multiset equality is checked edge by edge: both sides must hold each edge
    id with the same multiplicity.  All pairs are evaluated at once with numpy.
    """
    n = G.vertex_count
    fails = dict.fromkeys(IDENTITY_NAMES, 0)
    if n < 2 or not G.edges:
        return fails
    masks = np.arange(1, (1 << n) - 1, dtype=np.int64)
    A, B = (x.ravel() for x in np.meshgrid(masks, masks, indexing="ij"))
    full = (1 << n) - 1
    bad = {name: np.zeros(A.shape, dtype=bool) for name in IDENTITY_NAMES}
    a_only, b_only, both, neither = A & ~B, B & ~A, A & B, full & ~(A | B)
    union = A | B
    for e in G.edges:
        bit_u, bit_v = np.int64(1 << e.u), np.int64(1 << e.v)

        def d(X):
            return ((X & bit_u) != 0).astype(np.int8) ^ ((X & bit_v) != 0).astype(np.int8)

        def between(X, Y):
            return (((X & bit_u) != 0) & ((Y & bit_v) != 0) | ((Y & bit_u) != 0) & ((X & bit_v) != 0)).astype(np.int8)

        dA, dB = d(A), d(B)
        sides = {
            "a": (dA + dB, d(union) + d(both) + 2 * between(a_only, b_only)),
            "b": (dA + dB, d(a_only) + d(b_only) + 2 * between(neither, both)),
            "c": (dA + 2 * between(a_only, both), d(a_only) + d(both)),
            "d": (dB + 2 * between(b_only, both), d(b_only) + d(both)),
            "e": (dA + 2 * between(b_only, neither), d(b_only) + d(union)),
            "f": (dB + 2 * between(a_only, neither), d(a_only) + d(union)),
        }
        for name, (lhs, rhs) in sides.items():
            bad[name] |= lhs != rhs
    return {name: int(bad[name].sum()) for name in IDENTITY_NAMES}


# ---------------------------------------------------------------------------
# text format


def parse_graph(text: str) -> FlexGraph:
    header = None
    specs = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if header is None:
            if len(parts) != 2:
                raise GraphFormatError(lineno, "header must be 'n m'")
            try:
                header = (int(parts[0]), int(parts[1]))
            except ValueError:
                raise GraphFormatError(lineno, "header must contain two integers") from None
            if header[0] < 1 or header[1] < 0:
                raise GraphFormatError(lineno, "n must be positive and m nonnegative")
            if header[0] > MAX_VERTICES:
                raise GraphFormatError(lineno, f"at most {MAX_VERTICES} vertices supported")
            continue
        if len(parts) != 4:
            raise GraphFormatError(lineno, "edge line must be 'u v cost safety'")
        try:
            u, v = int(parts[0]), int(parts[1])
        except ValueError:
            raise GraphFormatError(lineno, "endpoints must be integers") from None
        try:
            cost = Fraction(parts[2])
        except (ValueError, ZeroDivisionError):
            raise GraphFormatError(lineno, f"bad cost {parts[2]!r}") from None
        if cost < 0:
            raise GraphFormatError(lineno, "negative cost")
        if parts[3] not in ("S", "U"):
            raise GraphFormatError(lineno, f"unknown safety token {parts[3]!r}")
        n = header[0]
        if not (0 <= u < n and 0 <= v < n):
            raise GraphFormatError(lineno, "vertex out of range")
        if u == v:
            raise GraphFormatError(lineno, "self-loop rejected")
        specs.append((u, v, cost, Safety(parts[3])))
        if len(specs) > header[1]:
            raise GraphFormatError(lineno, f"more than {header[1]} edges")
    if header is None:
        raise GraphFormatError(1, "missing header")
    if len(specs) != header[1]:
        raise GraphFormatError(lineno if text else 1, f"expected {header[1]} edges, found {len(specs)}")
    return FlexGraph.from_edges(header[0], specs)


def format_graph(G: FlexGraph, comment: str | None = None) -> str:
    lines = []
    if comment:
        lines.extend(f"# {c}" for c in comment.splitlines())
    lines.append(f"{G.vertex_count} {G.m}")
    for e in G.edges:
        lines.append(f"{e.u} {e.v} {e.cost} {e.safety.value}")
    return "\n".join(lines) + "\n"


class BoundaryCounter:
    """Fast repeated boundary counts on one graph (parallel edges aggregated)."""

    def __init__(self, G: FlexGraph, ignored: Iterable[int] = ()):
        skip = set(ignored)
        agg: dict[tuple[int, int], list[int]] = {}
        for e in G.edges:
            if e.id in skip:
                continue
            rec = agg.setdefault((min(e.u, e.v), max(e.u, e.v)), [0, 0])
            rec[0] += 1
            rec[1] += e.unsafe
        self.n = G.vertex_count
        self.full = G.full_mask
        self.pairs = [(u, v, m, bad) for (u, v), (m, bad) in sorted(agg.items())]
        self._cache: dict[int, tuple[int, int]] = {}

    def stats(self, mask: int) -> tuple[int, int]:
        """``(size, unsafe_count)`` of the cut with side ``mask``."""
        key = canonical(mask, self.n)
        hit = self._cache.get(key)
        if hit is None:
            size = unsafe = 0
            for u, v, m, bad in self.pairs:
                if ((key >> u) ^ (key >> v)) & 1:
                    size += m
                    unsafe += bad
            hit = self._cache[key] = (size, unsafe)
        return hit

    def between(self, a: int, b: int) -> tuple[int, int]:
        """``(count, unsafe_count)`` of E(a, b) for disjoint masks."""
        size = unsafe = 0
        for u, v, m, bad in self.pairs:
            bu, bv = 1 << u, 1 << v
            if (a & bu and b & bv) or (b & bu and a & bv):
                size += m
                unsafe += bad
        return size, unsafe
