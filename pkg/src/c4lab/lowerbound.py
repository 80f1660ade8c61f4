"""Cycle blow-ups and the forbidden family that defeats polynomial bounds.

``B(k, f)`` replaces each vertex of ``C_k`` by an ``f``-clique and each edge
by a complete bipartite graph. For ``k >= 5`` it has no induced cycle of
length ``4..k-1`` (three consecutive vertices of a short cycle would land
in at most two adjacent parts and span a triangle), while every transversal
induces ``C_k``. One edit touches at most ``(n/k)^(k-2)`` transversals, which
is what keeps blow-ups far from the family.
"""

from __future__ import annotations

import itertools
import json
import math
import os
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Callable, Iterable, Mapping, Optional, Sequence, Union

from .errors import BudgetExceeded
from .generators import as_rng, cycle_graph
from .graph import Graph
from .io import format_graph, write_text_atomic
from .kernels import EXACT_CYCLE_N_CAP, is_induced_cycle, iter_induced_cycles

TRANSVERSAL_CAP = 1_000_000
KPARTITE_PART_CAP = 6
KPARTITE_F_CAP = 2
KPARTITE_SEARCH_CAP = 500_000


@dataclass(frozen=True)
class BlowupSpec:
    k: int
    f: int

    def __post_init__(self):
        if self.k < 3 or self.f < 1:
            raise ValueError("blow-ups need k >= 3 and f >= 1")

    @property
    def epsilon(self) -> Fraction:
        """``1 / (2 k^2)``, the farness attached to cycle length ``k``."""
        return Fraction(1, 2 * self.k * self.k)

    @property
    def n(self) -> int:
        return self.k * self.f

    @property
    def expected_edges(self) -> int:
        return blowup_edge_count(self.k, self.f)


@dataclass(frozen=True)
class Blowup:
    spec: BlowupSpec
    graph: Graph = field(repr=False)
    parts: tuple[tuple[int, ...], ...]


def blowup_cycle(k: Union[int, BlowupSpec], f: Optional[int] = None) -> Blowup:
    """``B(k, f)`` with part ``i`` on vertices ``i*f .. (i+1)*f - 1``."""
    spec = k if isinstance(k, BlowupSpec) else BlowupSpec(k, f)
    if isinstance(k, BlowupSpec) and f is not None:
        spec = BlowupSpec(k.k, f)
    k, f = spec.k, spec.f
    parts = tuple(tuple(range(i * f, (i + 1) * f)) for i in range(k))
    edges = []
    for i, p in enumerate(parts):
        edges.extend(itertools.combinations(p, 2))
        edges.extend(itertools.product(p, parts[(i + 1) % k]))
    g = Graph.from_edges(k * f, edges)
    return Blowup(spec, g, parts)


def blowup_edge_count(k: int, f: int) -> int:
    """``k binom(f, 2) + k f^2``."""
    return k * math.comb(f, 2) + k * f * f


def verify_no_short_induced_cycles(
    g: Graph, parts: Sequence[Sequence[int]], k: int, *, max_n: int = EXACT_CYCLE_N_CAP
) -> tuple[bool, Optional[tuple[int, ...]]]:
    """``(True, None)`` iff no induced cycle of length ``4..k-1`` exists, else a counterexample."""
    if g.n > max_n:
        raise BudgetExceeded(f"short-cycle search on n={g.n} exceeds cap {max_n}")
    if sorted(v for p in parts for v in p) != list(range(g.n)):
        raise ValueError("parts must partition the vertex set")
    for cyc in iter_induced_cycles(g, range(4, k)):
        return False, cyc
    return True, None


@dataclass(frozen=True)
class TransversalHypergraph:
    parts: tuple[tuple[int, ...], ...]
    edges: frozenset

    def __len__(self) -> int:
        return len(self.edges)


def transversal_cycle_hypergraph(g: Graph, parts: Sequence[Sequence[int]]) -> TransversalHypergraph:
    """All tuples ``(v_1..v_k)``, one per part, inducing the cycle ``v_1 v_2 .. v_k v_1``."""
    parts = tuple(tuple(p) for p in parts)
    if math.prod(len(p) for p in parts) > TRANSVERSAL_CAP:
        raise BudgetExceeded("transversal enumeration exceeds cap")
    edges = frozenset(t for t in itertools.product(*parts) if is_induced_cycle(g, t))
    return TransversalHypergraph(parts, edges)


@dataclass(frozen=True)
class ResilienceResult:
    ok: bool
    floor: int
    min_retained: int
    trials: int
    violation: Optional[tuple] = None


def edit_resilience_check(
    spec: Union[BlowupSpec, int],
    part_size: int,
    m: int,
    rng=None,
    trials: int = 100,
    *,
    pair_pool: Optional[Sequence[tuple[int, int]]] = None,
) -> ResilienceResult:
    """After ``m`` random toggles, at least ``f^k - m f^(k-2)`` transversals still induce ``C_k``.

    ``pair_pool`` restricts the random toggles (e.g. to pairs inside parts).
    """
    k = spec.k if isinstance(spec, BlowupSpec) else spec
    b = blowup_cycle(k, part_size)
    f = part_size
    floor = f ** k - m * f ** (k - 2)
    if floor <= 0:
        raise ValueError("need m * f^(k-2) < f^k")
    rng = as_rng(rng)
    pool = list(pair_pool) if pair_pool is not None else list(itertools.combinations(range(b.graph.n), 2))
    if m > len(pool):
        raise ValueError("more edits than available pairs")
    worst = f ** k
    for _ in range(trials):
        chosen = [pool[int(i)] for i in rng.choice(len(pool), size=m, replace=False)]
        h = b.graph.toggled(chosen)
        kept = len(transversal_cycle_hypergraph(h, b.parts))
        worst = min(worst, kept)
        if kept < floor:
            return ResilienceResult(False, floor, kept, trials, tuple(chosen))
    return ResilienceResult(True, floor, worst, trials)


def single_edit_destruction(k: int, f: int) -> tuple[int, tuple[int, int]]:
    """Largest number of transversal cycles removed by one toggle, over all pairs."""
    b = blowup_cycle(k, f)
    base = transversal_cycle_hypergraph(b.graph, b.parts).edges
    worst, where = -1, (0, 1)
    for pair in itertools.combinations(range(b.graph.n), 2):
        kept = transversal_cycle_hypergraph(b.graph.toggled([pair]), b.parts).edges
        lost = len(base - kept)
        if lost > worst:
            worst, where = lost, pair
    return worst, where


def find_complete_kpartite_subhypergraph(h: TransversalHypergraph, f: int) -> Optional[tuple[tuple[int, ...], ...]]:
    """``f``-subsets ``U_i`` of the parts with every transversal of the ``U_i`` an edge.

    Brute force; limited to parts of at most 6 vertices and ``f <= 2``.
    Subsets are tried in lexicographic order, so the first hit is returned.
    """
    if f < 1:
        raise ValueError("f must be positive")
    if f > KPARTITE_F_CAP or any(len(p) > KPARTITE_PART_CAP for p in h.parts):
        raise BudgetExceeded(f"complete k-partite search limited to parts <= {KPARTITE_PART_CAP}, f <= {KPARTITE_F_CAP}")
    choices = [list(itertools.combinations(p, f)) for p in h.parts]
    if math.prod(len(c) for c in choices) > KPARTITE_SEARCH_CAP:
        raise BudgetExceeded("complete k-partite search space exceeds cap")
    if any(not c for c in choices):
        return None
    edges = h.edges
    # project edges to prefixes so partial choices can be pruned
    prefixes = [set() for _ in range(len(h.parts) + 1)]
    for e in edges:
        for i in range(len(e) + 1):
            prefixes[i].add(e[:i])

    def extend(i: int, chosen: list[tuple[int, ...]]) -> Optional[list]:
        if i == len(choices):
            ok = all(t in edges for t in itertools.product(*chosen))
            return list(chosen) if ok else None
        for u in choices[i]:
            chosen.append(u)
            if all(t in prefixes[i + 1] for t in itertools.product(*chosen)):
                got = extend(i + 1, chosen)
                if got is not None:
                    return got
            chosen.pop()
        return None

    found = extend(0, [])
    return tuple(found) if found is not None else None


def has_induced_copy(host: Graph, pattern: Graph) -> bool:
    """Backtracking test for an induced subgraph of ``host`` isomorphic to ``pattern``."""
    p = pattern.n
    if p > host.n:
        return False
    order = sorted(range(p), key=lambda v: -pattern.degree(v))
    image: dict[int, int] = {}

    def place(i: int, used: int) -> bool:
        if i == p:
            return True
        v = order[i]
        for w in range(host.n):
            if used >> w & 1 or host.degree(w) < pattern.degree(v):
                continue
            if all(host.adjacent(w, image[u]) == pattern.adjacent(v, u) for u in order[:i]):
                image[v] = w
                if place(i + 1, used | 1 << w):
                    return True
                del image[v]
        return False

    return place(0, 0)


@dataclass(frozen=True)
class FamilyMember:
    name: str
    graph: Graph = field(repr=False)
    k: Optional[int] = None
    f: Optional[int] = None
    epsilon: Optional[Fraction] = None


@dataclass(frozen=True)
class HardFamily:
    members: tuple[FamilyMember, ...]

    def manifest(self) -> list[dict]:
        out = []
        for m in self.members:
            out.append({
                "name": m.name,
                "file": f"{m.name}.txt",
                "n": m.graph.n,
                "m": m.graph.m,
                "k": m.k,
                "f": m.f,
                "epsilon": None if m.epsilon is None else str(m.epsilon),
            })
        return out


def build_hard_family(g_table: Union[Mapping, Callable], k_range: Iterable[int]) -> HardFamily:
    """``{C4}`` plus ``B(k, g(1/(2k^2)))`` for each ``k`` in ``k_range`` (each ``k >= 5``)."""
    lookup = g_table if callable(g_table) else (lambda eps: g_table[eps])
    members = [FamilyMember("C4", cycle_graph(4))]
    for k in k_range:
        if k < 5:
            raise ValueError("family blow-ups start at k = 5")
        eps = Fraction(1, 2 * k * k)
        f = int(lookup(eps))
        b = blowup_cycle(k, f)
        members.append(FamilyMember(f"B_{k}_{f}", b.graph, k, f, eps))
    return HardFamily(tuple(members))


def write_hard_family(directory: Union[str, os.PathLike], fam: HardFamily) -> Path:
    """One edge-list file per member plus ``manifest.json``."""
    d = Path(directory)
    d.mkdir(parents=True, exist_ok=True)
    for m in fam.members:
        write_text_atomic(d / f"{m.name}.txt", format_graph(m.graph, m.name))
    path = d / "manifest.json"
    write_text_atomic(path, json.dumps({"members": fam.manifest()}, indent=2, sort_keys=True) + "\n")
    return path
