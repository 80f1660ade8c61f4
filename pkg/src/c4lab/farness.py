"""How many edits separate a graph from induced-C4-freeness or chordality.

Three views: an exact bounded search (small ``n``), a lower bound from
witnesses that share no vertex pair, and an upper bound from the best of
several constructive strategies, each verified by the recognizer.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Optional, Union

from .errors import BudgetExceeded
from .graph import ADD, DELETE, EditSet, Graph, bits, mask_of, norm_pair
from .indset import C4_ONLY, CHORDAL, FamilyDescriptor, indset_edit
from .kernels import (
    EXACT_CYCLE_LEN_CAP,
    count_induced_c4,
    is_independent,
    iter_induced_c4,
    iter_induced_cycles,
)

EXACT_N_CAP = 8

PropertyLike = Union[FamilyDescriptor, str]
_ALIASES = {
    "c4": C4_ONLY, "c4-only": C4_ONLY, "induced-c4-free": C4_ONLY, "induced-c4": C4_ONLY,
    "chordal": CHORDAL, "chordal-family": CHORDAL, "induced-cycle>=4": CHORDAL,
}


def resolve_property(prop: PropertyLike) -> FamilyDescriptor:
    if isinstance(prop, FamilyDescriptor):
        return prop
    try:
        return _ALIASES[prop.lower()]
    except KeyError:
        raise ValueError(f"unknown property {prop!r}; use one of {sorted(_ALIASES)}") from None


def _witness_pairs(w: Iterable[int]) -> list[tuple[int, int]]:
    return [norm_pair(a, b) for a, b in itertools.combinations(sorted(w), 2)]


@dataclass(frozen=True)
class ExactResult:
    distance: int
    edits: EditSet


def exact_edit_distance(
    g: Graph,
    prop: PropertyLike = C4_ONLY,
    budget: Optional[int] = None,
    *,
    max_n: int = EXACT_N_CAP,
) -> Optional[ExactResult]:
    """Minimum number of toggles reaching the property, or ``None`` if it exceeds ``budget``.

    Bounded search tree with iterative deepening: some pair inside any
    witness must be toggled, so branching on the pairs of one witness is
    exact. Without a budget the search needs ``n <= max_n``.
    """
    fam = resolve_property(prop)
    if budget is None and g.n > max_n:
        raise BudgetExceeded(f"exact edit distance on n={g.n} exceeds cap {max_n} without a budget")
    lower = packing_lower_bound(g, fam).count
    upper = heuristic_upper_bound(g, fam)
    limit = upper.count if budget is None else min(budget, upper.count)
    failed: set[tuple[tuple[int, ...], int]] = set()
    path: list[tuple[int, int]] = []

    def search(h: Graph, left: int, done: frozenset) -> bool:
        w = fam.witness(h)
        if w is None:
            return True
        if left == 0 or (h.adj, left) in failed:
            return False
        for pair in _witness_pairs(w):
            if pair in done:
                continue
            path.append(pair)
            if search(h.toggled([pair]), left - 1, done | {pair}):
                return True
            path.pop()
        failed.add((h.adj, left))
        return False

    for d in range(lower, limit + 1):
        if d == upper.count:
            return ExactResult(d, upper.edits)
        if search(g, d, frozenset()):
            return ExactResult(d, EditSet.for_pairs(g, path))
    return None


@dataclass(frozen=True)
class Packing:
    count: int
    witnesses: tuple[tuple[int, ...], ...]


def _witness_stream(g: Graph, fam: FamilyDescriptor, max_length: int):
    if fam is C4_ONLY or fam.kind == "c4-only":
        return iter_induced_c4(g)
    return iter_induced_cycles(g, range(4, min(g.n, max_length) + 1))


def packing_lower_bound(g: Graph, prop: PropertyLike = C4_ONLY, *, max_length: int = EXACT_CYCLE_LEN_CAP) -> Packing:
    """Greedy family of witnesses, no two sharing a vertex pair.

    Each witness needs its own edit, so the count bounds the distance from
    below. Cycle witnesses are limited to length ``max_length``, which only
    weakens the bound.
    """
    fam = resolve_property(prop)
    used: set[tuple[int, int]] = set()
    chosen = []
    for w in _witness_stream(g, fam, max_length):
        pairs = _witness_pairs(w)
        if used.isdisjoint(pairs):
            used.update(pairs)
            chosen.append(tuple(w))
    return Packing(len(chosen), tuple(chosen))


@dataclass(frozen=True)
class UpperBound:
    count: int
    edits: EditSet
    strategy: str


def _greedy_toggles(g: Graph, fam: FamilyDescriptor) -> Optional[Graph]:
    # fix one witness at a time with the toggle leaving the fewest induced C4s
    h = g
    for _ in range(g.n * g.n):
        w = fam.witness(h)
        if w is None:
            return h
        best = min(_witness_pairs(w), key=lambda p: (count_induced_c4(h.toggled([p])), p))
        h = h.toggled([best])
    return None


def _min_fill(g: Graph) -> Graph:
    # eliminate the vertex whose neighbourhood needs the fewest fill edges
    rows = list(g.adj)
    alive = g.full_mask
    while alive:
        def fill(v):
            nb = rows[v] & alive
            return sum((nb & ~rows[u] & ~(1 << u)).bit_count() for u in bits(nb)) // 2, v
        v = min(bits(alive), key=fill)
        nb = rows[v] & alive
        for u in bits(nb):
            add = nb & ~(1 << u)
            rows[u] |= add
        alive &= ~(1 << v)
    # fill edges were added symmetrically since nb is symmetric in the clique it forms
    return Graph._trusted(g.n, tuple(rows))


def _best_split(g: Graph) -> Graph:
    order = sorted(range(g.n), key=lambda v: (-g.degree(v), v))
    best, best_cost = None, None
    for t in range(g.n + 1):
        k = mask_of(order[:t])
        rows = []
        for v in range(g.n):
            if k >> v & 1:
                rows.append((g.adj[v] | k) & ~(1 << v))
            else:
                rows.append(g.adj[v] & k)
        h = Graph._trusted(g.n, tuple(rows))
        cost = len(EditSet.diff(g, h))
        if best_cost is None or cost < best_cost:
            best, best_cost = h, cost
    return best


def _indset_route(g: Graph, fam: FamilyDescriptor) -> Optional[Graph]:
    # X: greedy family-free set by degree; Y: the rest, flattened to independent
    x: list[int] = []
    for v in sorted(range(g.n), key=lambda v: (-g.degree(v), v)):
        sub, _ = g.induced_subgraph(x + [v])
        if fam.is_free(sub):
            x.append(v)
    xm = mask_of(x)
    y = [v for v in range(g.n) if not xm >> v & 1]
    ym = mask_of(y)
    rows = [g.adj[v] & ~ym if ym >> v & 1 else g.adj[v] for v in range(g.n)]
    h = Graph._trusted(g.n, tuple(rows))
    if not is_independent(h, y):
        return None
    return indset_edit(h, x, y, fam, verify=False).graph


def heuristic_upper_bound(g: Graph, prop: PropertyLike = C4_ONLY) -> UpperBound:
    """Fewest edits among several strategies, each result checked by the recognizer.

    Strategies: greedy witness toggling, min-fill triangulation (chordal
    implies C4-free), best degree-threshold split graph, the anti-matching
    route, and the complete and empty graphs.
    """
    fam = resolve_property(prop)
    if fam.is_free(g):
        return UpperBound(0, EditSet(()), "none")
    candidates = {
        "greedy": _greedy_toggles(g, fam),
        "min-fill": _min_fill(g),
        "split": _best_split(g),
        "indset": _indset_route(g, fam),
        "complete": Graph.from_edges(g.n, itertools.combinations(range(g.n), 2)),
        "empty": Graph.empty(g.n),
    }
    best = None
    for name, h in candidates.items():
        if h is None or not fam.is_free(h):
            continue
        e = EditSet.diff(g, h)
        if best is None or len(e) < best.count:
            best = UpperBound(len(e), e, name)
    assert best is not None  # the complete graph always qualifies
    return best


@dataclass(frozen=True)
class FarnessCertificate:
    lower: int
    upper: int
    exact: Optional[int]
    property: str
    upper_edits: EditSet = field(repr=False)
    lower_witnesses: tuple = field(repr=False, default=())
    exact_edits: Optional[EditSet] = field(repr=False, default=None)
    strategy: str = ""

    def verify(self, g: Graph) -> bool:
        fam = resolve_property(self.property)
        ok = self.lower <= self.upper and fam.is_free(g.toggled(self.upper_edits.pairs()))
        if self.exact is not None:
            ok = ok and self.lower <= self.exact <= self.upper
            ok = ok and self.exact_edits is not None and fam.is_free(g.toggled(self.exact_edits.pairs()))
        return ok


def farness_certificate(g: Graph, prop: PropertyLike = C4_ONLY, *, exact_cap: int = EXACT_N_CAP) -> FarnessCertificate:
    fam = resolve_property(prop)
    low = packing_lower_bound(g, fam)
    up = heuristic_upper_bound(g, fam)
    exact = exact_edit_distance(g, fam, max_n=exact_cap) if g.n <= exact_cap else None
    cert = FarnessCertificate(
        lower=low.count,
        upper=up.count,
        exact=exact.distance if exact else None,
        property=fam.kind,
        upper_edits=up.edits,
        lower_witnesses=low.witnesses,
        exact_edits=exact.edits if exact else None,
        strategy=up.strategy,
    )
    if not cert.verify(g):
        raise AssertionError("farness certificate failed re-verification")
    return cert
