"""Seeded instance generation: random multigraphs and hand-built gadgets."""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction

from .flex import is_flex_connected_cutwise
from .graph import FlexGraph, PreconditionError, Safety

S, U = Safety.SAFE, Safety.UNSAFE

MODES = ("random", "gadget-G1", "gadget-G2", "gadget-G3", "ring-of-cliques", "ring-random")


class GenerationError(RuntimeError):
    pass


@dataclass(frozen=True)
class GeneratorParams:
    mode: str = "random"
    p: int = 2
    seed: int = 0
    n_range: tuple[int, int] = (4, 7)
    m_range: tuple[int, int] = (6, 14)
    unsafe_prob: float = 0.4
    cost_range: tuple[int, int] = (1, 9)
    require_flex: bool = True  # random mode: keep only (p, 2)-flex-connected draws
    group_size: int | None = None  # ring modes; None means p + 1
    retries: int = 500

    def __post_init__(self):
        if self.mode not in MODES:
            raise PreconditionError(f"unknown mode {self.mode!r}")
        if self.p < 1:
            raise PreconditionError("p must be positive")
        if not 1 <= self.n_range[0] <= self.n_range[1]:
            raise PreconditionError("bad n_range")
        if not 0 <= self.m_range[0] <= self.m_range[1]:
            raise PreconditionError("bad m_range")
        if not 0 <= self.unsafe_prob <= 1:
            raise PreconditionError("unsafe_prob must lie in [0, 1]")


def gadget_g1() -> FlexGraph:
    """Two safe triangles a1a2a3 (0,1,2) and b1b2b3 (3,4,5).

    Cross edges a1b1, a2b2, a3b3 are unsafe and a1b2 is safe, so the triangle
    cut has 4 edges, 3 of them unsafe.
    """
    edges = [(0, 1, 1, S), (1, 2, 1, S), (0, 2, 1, S), (3, 4, 1, S), (4, 5, 1, S), (3, 5, 1, S)]
    edges += [(0, 3, 1, U), (1, 4, 1, U), (2, 5, 1, U), (0, 4, 1, S)]
    return FlexGraph.from_edges(6, edges)


def gadget_g2() -> FlexGraph:
    """Two safe K4s a1..a4 (0-3) and b1..b4 (4-7); a1b1, a2b2, a3b3 unsafe, a4b4, a1b2 safe."""
    edges = [(i, j, 1, S) for base in (0, 4) for i in range(base, base + 4) for j in range(i + 1, base + 4)]
    edges += [(0, 4, 1, U), (1, 5, 1, U), (2, 6, 1, U), (3, 7, 1, S), (0, 5, 1, S)]
    return FlexGraph.from_edges(8, edges)


def ring_pattern(p: int) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """Inter-group edge counts and unsafe counts for (x,y), (y,z), (z,w), (w,x)."""
    if p % 2:
        alpha = (p + 1) // 2
        return (alpha, alpha, alpha + 1, alpha + 1), (1, 0, 2, 3)
    half = p // 2 + 1
    return (half,) * 4, (2, 1, 1, 2)


def ring_of_cliques(
    p: int,
    counts=None,
    unsafe=None,
    group_size: int | None = None,
    rng: random.Random | None = None,
    extra: list[tuple[int, int, int, Safety]] | None = None,
) -> FlexGraph:
    """Groups joined in a cycle, four (x, y, z, w) unless ``counts`` says otherwise.

    Each group is a safe clique (parallel copies when smaller than p + 1, so
    every split of a group still has at least p safe edges).  Group g holds
    vertices ``g*s .. g*s + s - 1`` and ``counts[g]`` edges run from group g
    to group g + 1, the first ``unsafe[g]`` of them unsafe.  Without ``rng``
    inter-group edges attach round-robin; with it, endpoints are random.
    """
    s = group_size or p + 1
    default_counts, default_unsafe = ring_pattern(p)
    counts = counts or default_counts
    unsafe = unsafe or default_unsafe
    k = len(counts)
    edges = []
    mult = math.ceil(p / (s - 1)) if s > 1 else 0
    for g in range(k):
        base = g * s
        for i in range(base, base + s):
            for j in range(i + 1, base + s):
                edges.extend([(i, j, 1, S)] * mult)
    cursor = [0] * k
    for g in range(k):
        h = (g + 1) % k
        for t in range(counts[g]):
            if rng is None:
                u = g * s + cursor[g] % s
                v = h * s + cursor[h] % s
                cursor[g] += 1
                cursor[h] += 1
            else:
                u = g * s + rng.randrange(s)
                v = h * s + rng.randrange(s)
            edges.append((u, v, 1, U if t < unsafe[g] else S))
    edges.extend(extra or [])
    return FlexGraph.from_edges(k * s, edges)


def gadget_g3(p: int = 3) -> FlexGraph:
    """Ring of four (p+1)-cliques; for p = 3 the sides {x,y} and {y,z} cross and are violated."""
    if p % 2 == 0:
        raise PreconditionError("gadget G3 is defined for odd p")
    return ring_of_cliques(p)


GROUPS = {"x": 0, "y": 1, "z": 2, "w": 3}


def group_mask(p: int, names: str, group_size: int | None = None) -> int:
    """Vertex mask of the union of ring groups, e.g. ``group_mask(3, "xy")``."""
    s = group_size or p + 1
    mask = 0
    for ch in names:
        mask |= ((1 << s) - 1) << (GROUPS[ch] * s)
    return mask


def _random_graph(params: GeneratorParams, rng: random.Random) -> FlexGraph:
    n = rng.randint(*params.n_range)
    m = rng.randint(*params.m_range)
    edges = []
    if n > 1:
        for _ in range(m):
            u, v = rng.sample(range(n), 2)
            safety = U if rng.random() < params.unsafe_prob else S
            edges.append((u, v, rng.randint(*params.cost_range), safety))
    return FlexGraph.from_edges(n, edges)


def _random_ring(params: GeneratorParams, rng: random.Random) -> FlexGraph:
    """A ring of 4 to 6 groups with near-critical inter-group counts.

    Arcs of such rings are (p+2)-cuts, which is where crossing violated
    pairs and triples live.
    """
    p = params.p
    k = rng.choice((4, 4, 5, 6))
    s = params.group_size or rng.choice([1, 1, 2, 2, 3] if p >= 4 or k > 4 else [1, 1, 2, 3, p + 1])
    if rng.random() < 0.3 and k == 4:
        counts, unsafe = (list(x) for x in ring_pattern(p))
        shift = rng.randrange(4)
        counts, unsafe = counts[shift:] + counts[:shift], unsafe[shift:] + unsafe[:shift]
    elif rng.random() < 0.4:
        # alternating low/high counts: every arc between a low and a high edge is a (p+2)-cut
        low, high = ((p + 1) // 2, (p + 3) // 2) if p % 2 else (p // 2, p // 2 + 2)
        k = rng.choice((4, 6))
        counts = [low if g % 2 == 0 else high for g in range(k)]
        unsafe = [rng.choice((0, 0, 1)) if c == low else min(c, rng.choice((1, 2, 3, 3))) for c in counts]
    else:
        choices = ((p + 1) // 2, (p + 1) // 2 + 1) if p % 2 else (p // 2, p // 2 + 1, p // 2 + 1, p // 2 + 2)
        counts = [rng.choice(choices) for _ in range(k)]
        if p % 2:
            unsafe = [rng.choice((0, 0, 1)) if c == choices[0] else min(c, rng.choice((1, 2, 3, 3))) for c in counts]
        else:
            unsafe = [min(c, rng.choice((0, 1, 1, 2, 2, 3))) for c in counts]
    extra = []
    for _ in range(rng.choice((0, 0, 0, 1, 2))):
        u, v = rng.sample(range(k * s), 2)
        extra.append((u, v, 1, U if rng.random() < params.unsafe_prob else S))
    G = ring_of_cliques(p, counts, unsafe, s, rng, extra)
    lo, hi = params.cost_range
    return FlexGraph.from_edges(
        G.vertex_count, [(e.u, e.v, rng.randint(lo, hi), e.safety) for e in G.edges]
    )


def generate_instance(params: GeneratorParams) -> FlexGraph:
    rng = random.Random(params.seed)
    if params.mode == "gadget-G1":
        return gadget_g1()
    if params.mode == "gadget-G2":
        return gadget_g2()
    if params.mode == "gadget-G3":
        return gadget_g3(params.p if params.p % 2 else 3)
    if params.mode == "ring-of-cliques":
        return ring_of_cliques(params.p, group_size=params.group_size, rng=rng if params.seed else None)
    draw = _random_graph if params.mode == "random" else _random_ring
    for _ in range(params.retries):
        G = draw(params, rng)
        if params.mode == "random" and not params.require_flex:
            return G
        if is_flex_connected_cutwise(G, params.p, 2):
            return G
    raise GenerationError(f"no ({params.p},2)-flex-connected instance after {params.retries} draws")


def with_costs(G: FlexGraph, cost) -> FlexGraph:
    """Copy of ``G`` with every edge cost replaced by ``cost(edge)``."""
    return FlexGraph.from_edges(G.vertex_count, [(e.u, e.v, Fraction(cost(e)), e.safety) for e in G.edges])
