"""Anti-matching edits against an independent set.

Given ``X`` whose induced graph avoids a family ``F`` and an independent
``Y``, deleting the edges from each ``y`` to a maximal anti-matching
``M(y)`` of ``N_X(y)`` leaves every ``N_X(y)`` free of large anti-matchings,
which kills every induced copy of a member of ``F`` that uses ``Y``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb
from typing import Callable, Optional

from .errors import PreconditionError
from .generators import as_rng
from .graph import DELETE, EditSet, Graph, bits, mask_of, norm_pair, vertex_set
from .kernels import count_induced_c4, find_induced_c4, find_induced_cycle_geq4, is_independent


@dataclass(frozen=True)
class AntiMatching:
    owner: int
    pairs: tuple[tuple[int, int], ...]

    def __len__(self) -> int:
        return len(self.pairs)

    def verify(self, g: Graph, x) -> bool:
        """Disjoint non-edges inside ``N_X(owner)``, and maximal."""
        nx = g.adj[self.owner] & mask_of(x)
        used = 0
        for u, v in self.pairs:
            if g.adjacent(u, v) or not (nx >> u & 1 and nx >> v & 1):
                return False
            if used >> u & 1 or used >> v & 1:
                return False
            used |= 1 << u | 1 << v
        free = nx & ~used
        return all(not (free & ~g.adj[u] & ~(1 << u)) for u in bits(free))


@dataclass(frozen=True)
class FamilyDescriptor:
    """Forbidden family: ``"c4-only"`` is ``{C4}``, ``"chordal-family"`` all cycles of length at least 4."""

    kind: str

    def __post_init__(self):
        if self.kind not in ("c4-only", "chordal-family"):
            raise ValueError(f"unknown family {self.kind!r}")

    def witness(self, g: Graph) -> Optional[tuple[int, ...]]:
        if self.kind == "c4-only":
            return find_induced_c4(g)
        return find_induced_cycle_geq4(g)

    def is_free(self, g: Graph) -> bool:
        return self.witness(g) is None


C4_ONLY = FamilyDescriptor("c4-only")
CHORDAL = FamilyDescriptor("chordal-family")


def _nonedges(g: Graph, nm: int) -> list[tuple[int, int]]:
    return [(u, v) for u in bits(nm) for v in bits(nm & ~g.adj[u] & ~((1 << (u + 1)) - 1))]


def maximal_antimatching(g: Graph, x, y: int, *, rng=None) -> AntiMatching:
    """Greedy maximal anti-matching of ``N_X(y)``.

    Non-edges are scanned lexicographically, or in a seeded shuffled order
    when ``rng`` is given.
    """
    x = vertex_set(x, g.n)
    if y in x:
        raise ValueError("y must lie outside X")
    cand = _nonedges(g, g.adj[y] & mask_of(x))
    if rng is not None:
        perm = as_rng(rng).permutation(len(cand))
        cand = [cand[i] for i in perm]
    used = 0
    pairs = []
    for u, v in cand:
        if not (used >> u & 1 or used >> v & 1):
            pairs.append((u, v))
            used |= 1 << u | 1 << v
    am = AntiMatching(y, tuple(sorted(pairs)))
    assert am.verify(g, x)
    return am


def d2(g: Graph, x, y: int) -> int:
    """Non-adjacent pairs inside ``N_X(y)``."""
    nm = g.adj[y] & mask_of(x)
    c = nm.bit_count()
    e = sum((g.adj[u] & nm).bit_count() for u in bits(nm)) // 2
    return c * (c - 1) // 2 - e


@dataclass(frozen=True)
class IndsetEdit:
    graph: Graph = field(repr=False)
    edits: EditSet
    matchings: tuple[AntiMatching, ...]

    def __iter__(self):
        return iter((self.graph, self.edits, self.matchings))


def _check_preconditions(g: Graph, x, y, fam: FamilyDescriptor) -> None:
    if set(x) & set(y):
        raise ValueError("X and Y must be disjoint")
    if not is_independent(g, y):
        ym = mask_of(y)
        u = next(v for v in y if g.adj[v] & ym)
        v = next(bits(g.adj[u] & ym))
        raise PreconditionError("Y is not independent", (u, v))
    sub, labels = g.induced_subgraph(x)
    w = fam.witness(sub)
    if w is not None:
        raise PreconditionError(f"G[X] is not {fam.kind}-free", tuple(labels[i] for i in w))


def indset_edit(g: Graph, x, y, fam: FamilyDescriptor = C4_ONLY, *, rng=None, verify: bool = True) -> IndsetEdit:
    """Delete each ``y``'s edges to the vertices of its anti-matching ``M(y)``.

    The edit count is exactly ``2 * sum |M(y)|`` and only X-Y edges change.
    With ``verify`` the family recognizer is run on ``G[X ∪ Y]`` afterwards.
    """
    x, y = vertex_set(x, g.n), vertex_set(y, g.n)
    _check_preconditions(g, x, y, fam)
    rng = as_rng(rng) if rng is not None else None
    matchings = tuple(maximal_antimatching(g, x, v, rng=rng) for v in y)
    toggles = []
    for am in matchings:
        for u, v in am.pairs:
            for w in (u, v):
                a, b = norm_pair(w, am.owner)
                toggles.append((a, b, DELETE))
    edits = EditSet.from_toggles(toggles)
    if len(edits) != 2 * sum(len(am) for am in matchings):
        raise AssertionError("edit count differs from twice the anti-matching total")
    out = g.toggled(edits.pairs())
    if verify:
        sub, labels = out.induced_subgraph(sorted(set(x) | set(y)))
        w = fam.witness(sub)
        if w is not None:
            raise AssertionError(f"edited graph still contains {[labels[i] for i in w]}")
    return IndsetEdit(out, edits, matchings)


@dataclass(frozen=True)
class C4Certificate:
    certified_count: int
    analytic_bound: Fraction  # (1/2)(sum d2)^2 / binom(|X|,2), Jensen over X-pairs
    sum_d2: int


def c4_lower_bound_certificate(g: Graph, x, y, *, verify: bool = True) -> C4Certificate:
    """Count ``sum over non-adjacent u, v in X of binom(t(u, v), 2)``,
    ``t(u, v)`` being the number of common Y-neighbours.

    With ``Y`` independent each such configuration ``u, y, v, y'`` is an
    induced C4, and distinct configurations are distinct 4-sets, so the sum
    is a lower bound on the induced-C4 count. With ``verify`` every counted
    configuration is checked directly.
    """
    x, y = vertex_set(x, g.n), vertex_set(y, g.n)
    if not is_independent(g, y):
        raise PreconditionError("Y is not independent", y)
    ym = mask_of(y)
    total = 0
    for u, v in itertools.combinations(x, 2):
        if g.adjacent(u, v):
            continue
        common = g.adj[u] & g.adj[v] & ym
        t = common.bit_count()
        total += comb(t, 2)
        if verify:
            for a, b in itertools.combinations(bits(common), 2):
                if g.adjacent(a, b):
                    raise AssertionError("counted configuration is not an induced C4")
    s = sum(d2(g, x, v) for v in y)
    pairs = comb(len(x), 2)
    # sum over X-pairs of t equals sum d2; Jensen gives sum binom(t,2) >= P*binom(mean,2)
    analytic = Fraction(0)
    if pairs:
        mean = Fraction(s, pairs)
        analytic = max(Fraction(0), pairs * mean * (mean - 1) / 2)
    if verify and analytic > total:
        raise AssertionError("Jensen bound exceeds the exact sum")
    return C4Certificate(total, analytic, s)
