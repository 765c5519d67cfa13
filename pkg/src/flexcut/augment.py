"""Primal-dual covering of a cut family by links.

A link covers a cut when it has exactly one endpoint on each side.  The
engine raises duals uniformly on the inclusion-minimal uncovered sets, adds
one newly tight link per round and finishes with a reverse-delete pass.  All
arithmetic is exact (``Fraction``).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .flex import CutFamily
from .graph import FlexGraph, PreconditionError, Safety, as_mask, members

BRUTE_FORCE_LINK_LIMIT = 20


class InfeasibleCover(ValueError):
    def __init__(self, side: int):
        super().__init__(f"no link crosses cut {members(side)}")
        self.side = side


@dataclass(frozen=True)
class Link:
    id: int
    u: int
    v: int
    cost: Fraction
    safety: Safety = Safety.SAFE

    def crosses(self, mask: int) -> bool:
        return ((mask >> self.u) ^ (mask >> self.v)) & 1 == 1


def make_links(specs: Iterable[Sequence], start: int = 0) -> list[Link]:
    """Links from ``(u, v, cost)`` tuples with ids ``start, start+1, ...``."""
    return [Link(start + i, int(s[0]), int(s[1]), Fraction(s[2])) for i, s in enumerate(specs)]


def links_from_edges(G: FlexGraph, ids: Iterable[int]) -> list[Link]:
    return [Link(e.id, e.u, e.v, e.cost, e.safety) for e in (G.edges[i] for i in sorted(ids))]


def _sides(family, n: int | None) -> tuple[int, list[int]]:
    if isinstance(family, CutFamily):
        return family.n, family.sides
    if n is None:
        raise PreconditionError("n is required when the family is a plain list of sides")
    return n, [as_mask(s) for s in family]


def covers(S, links: Iterable[Link]) -> bool:
    mask = S.side if hasattr(S, "side") else as_mask(S)
    return any(link.crosses(mask) for link in links)


@dataclass
class DualState:
    values: dict[int, Fraction] = field(default_factory=dict)

    def load(self, link: Link) -> Fraction:
        return sum((y for s, y in self.values.items() if link.crosses(s)), Fraction(0))

    @property
    def total(self) -> Fraction:
        return sum(self.values.values(), Fraction(0))


def dual_feasibility_audit(duals: DualState, links: Iterable[Link]) -> tuple[bool, Link | None]:
    for link in links:
        if duals.load(link) > link.cost:
            return False, link
    return True, None


@dataclass(frozen=True)
class RoundTrace:
    active: tuple[int, ...]
    delta: Fraction
    tight_link: int


@dataclass
class AugmentationResult:
    chosen: tuple[int, ...]
    order: tuple[int, ...]
    cost: Fraction
    dual_bound: Fraction
    duals: DualState
    trace: list[RoundTrace]

    def to_dict(self) -> dict:
        return {
            "chosen": list(self.chosen),
            "order": list(self.order),
            "cost": self.cost,
            "dual_bound": self.dual_bound,
            "rounds": [
                {"active": len(r.active), "delta": r.delta, "tight_link": r.tight_link}
                for r in self.trace
            ],
        }


def _minimal(sets: list[int]) -> list[int]:
    return [s for s in sets if not any(t != s and t & s == t for t in sets)]


def primal_dual_cover(family, links: Sequence[Link], n: int | None = None) -> AugmentationResult:
    """Cover every cut of ``family`` with links.

    Both sides of each cut are treated as sets of the family, so the sets
    that receive dual value are inclusion-minimal among all uncovered sides.
    Ties between links that go tight together resolve to the lowest id.
    """
    n, sides = _sides(family, n)
    full = (1 << n) - 1
    for s in sides:
        if not covers(s, links):
            raise InfeasibleCover(s)
    sets = sorted({m for s in sides for m in (s, full ^ s)})
    by_id = {link.id: link for link in links}
    pool = sorted(links, key=lambda link: link.id)
    duals = DualState()
    load = {link.id: Fraction(0) for link in pool}
    chosen: list[Link] = []
    taken: set[int] = set()
    trace = []
    while True:
        uncovered = [s for s in sets if not any(link.crosses(s) for link in chosen)]
        if not uncovered:
            break
        active = _minimal(uncovered)
        best = None
        for link in pool:
            if link.id in taken:
                continue
            degree = sum(1 for s in active if link.crosses(s))
            if degree == 0:
                continue
            step = (link.cost - load[link.id]) / degree
            if best is None or step < best[0]:
                best = (step, link)
        if best is None:  # unreachable after the up-front coverage check
            raise InfeasibleCover(active[0])
        delta, tight = best
        for s in active:
            duals.values[s] = duals.values.get(s, Fraction(0)) + delta
        for link in pool:
            load[link.id] += delta * sum(1 for s in active if link.crosses(s))
            if load[link.id] > link.cost:
                raise AssertionError(f"dual infeasible on link {link.id} after raise")
        chosen.append(tight)
        taken.add(tight.id)
        trace.append(RoundTrace(tuple(active), delta, tight.id))
    order = tuple(link.id for link in chosen)
    kept = reverse_delete(family if isinstance(family, CutFamily) else sides, chosen)
    cost = sum((by_id[i].cost for i in kept), Fraction(0))
    return AugmentationResult(tuple(kept), order, cost, duals.total, duals, trace)


def reverse_delete(family, chosen: Sequence[Link]) -> list[int]:
    """Drop links, last added first, while the rest still covers every cut.

    Returns the surviving link ids in addition order.
    """
    sides = family.sides if isinstance(family, CutFamily) else [as_mask(s) for s in family]
    kept = list(chosen)
    for link in reversed(chosen):
        trial = [x for x in kept if x is not link]
        if all(covers(s, trial) for s in sides):
            kept = trial
    return [link.id for link in kept]


def brute_force_cover(family, links: Sequence[Link]) -> tuple[list[int], Fraction]:
    """Minimum-cost link subset covering every cut, by exhaustive branch and bound.

    Every cover contains a link crossing the first uncovered cut, so branching
    on those links enumerates all minimal covers.
    """
    if len(links) > BRUTE_FORCE_LINK_LIMIT:
        raise PreconditionError(f"brute force limited to {BRUTE_FORCE_LINK_LIMIT} links")
    sides = family.sides if isinstance(family, CutFamily) else [as_mask(s) for s in family]
    hits = [[j for j, link in enumerate(links) if link.crosses(s)] for s in sides]
    for s, h in zip(sides, hits):
        if not h:
            raise InfeasibleCover(s)
    best: list = [None, None]

    def search(picked: list[int], cost: Fraction, covered: set[int]) -> None:
        if best[1] is not None and cost >= best[1]:
            return
        open_cut = next((i for i in range(len(sides)) if i not in covered), None)
        if open_cut is None:
            best[0], best[1] = list(picked), cost
            return
        for j in sorted(hits[open_cut], key=lambda j: (links[j].cost, links[j].id)):
            if j in picked:
                continue
            newly = {i for i in range(len(sides)) if i not in covered and links[j].crosses(sides[i])}
            picked.append(j)
            search(picked, cost + links[j].cost, covered | newly)
            picked.pop()

    search([], Fraction(0), set())
    return sorted(links[j].id for j in best[0]), best[1]
