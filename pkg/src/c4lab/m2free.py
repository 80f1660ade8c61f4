"""Bipartite pairs without an induced 2-matching.

A pair ``(X, Y)`` of disjoint vertex sets is induced-M2-free exactly when the
sets ``N_Y(x)`` form a chain under inclusion. Sorting ``X`` by neighbourhood
size and checking consecutive containments therefore either certifies the
chain or exposes a 2-matching between two consecutive vertices.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable

from .errors import BudgetExceeded, PreconditionError
from .graph import ADD, DELETE, EditSet, Graph, bits, mask_of, norm_pair, vertex_set

EXACT_ORDER_CAP = 9


@dataclass(frozen=True)
class BipartitePair:
    host: Graph
    x: tuple[int, ...]
    y: tuple[int, ...]

    def __post_init__(self):
        x = vertex_set(self.x, self.host.n)
        y = vertex_set(self.y, self.host.n)
        if set(x) & set(y):
            raise ValueError("X and Y must be disjoint")
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "y", y)

    @property
    def y_mask(self) -> int:
        return mask_of(self.y)

    def nbr(self, v: int) -> int:
        """``N_Y(v)`` as a bitmask."""
        return self.host.adj[v] & self.y_mask

    def swapped(self) -> "BipartitePair":
        return BipartitePair(self.host, self.y, self.x)


@dataclass(frozen=True)
class M2Witness:
    """``x``-``y`` and ``x2``-``y2`` are edges, ``x``-``y2`` and ``x2``-``y`` are not."""

    x: int
    x2: int
    y: int
    y2: int

    def verify(self, g: Graph) -> bool:
        return (
            g.adjacent(self.x, self.y)
            and g.adjacent(self.x2, self.y2)
            and not g.adjacent(self.x, self.y2)
            and not g.adjacent(self.x2, self.y)
        )

    def as_list(self) -> list[int]:
        return [self.x, self.x2, self.y, self.y2]


@dataclass(frozen=True)
class NestedOrder:
    """Enumeration of X with nondecreasing, nested Y-neighbourhoods."""

    pair: BipartitePair = field(repr=False)
    order: tuple[int, ...]

    def __post_init__(self):
        if sorted(self.order) != list(self.pair.x):
            raise ValueError("order must enumerate X exactly")
        for a, b in zip(self.order, self.order[1:]):
            na, nb = self.pair.nbr(a), self.pair.nbr(b)
            if na & ~nb:
                raise ValueError(f"N_Y({a}) is not contained in N_Y({b})")


def _witness_between(p: BipartitePair, a: int, b: int) -> M2Witness | None:
    na, nb = p.nbr(a), p.nbr(b)
    only_a, only_b = na & ~nb, nb & ~na
    if only_a and only_b:
        y = (only_a & -only_a).bit_length() - 1
        y2 = (only_b & -only_b).bit_length() - 1
        return M2Witness(a, b, y, y2)
    return None


def find_induced_m2(p: BipartitePair) -> M2Witness | None:
    """First witness over pairs of X in lexicographic order, or ``None``."""
    for a, b in itertools.combinations(p.x, 2):
        w = _witness_between(p, a, b)
        if w is not None:
            return w
    return None


def count_induced_m2(p: BipartitePair) -> int:
    # the set {x, x', y, y'} determines which x owns which y, so each copy counts once
    total = 0
    for a, b in itertools.combinations(p.x, 2):
        na, nb = p.nbr(a), p.nbr(b)
        total += (na & ~nb).bit_count() * (nb & ~na).bit_count()
    return total


def nested_order(p: BipartitePair) -> NestedOrder | M2Witness:
    """Chain order of X (ties by vertex index), or the witness at the first break."""
    order = sorted(p.x, key=lambda v: (p.nbr(v).bit_count(), v))
    for a, b in zip(order, order[1:]):
        if p.nbr(a) & ~p.nbr(b):
            # |N(a)| <= |N(b)| and N(a) not inside N(b), so N(b) \ N(a) is nonempty too
            w = _witness_between(p, a, b)
            assert w is not None and w.verify(p.host)
            return w
    return NestedOrder(p, tuple(order))


def equipartition_sizes(m: int, r: int) -> list[int]:
    """``r`` block sizes summing to ``m``, larger blocks first."""
    q, extra = divmod(m, r)
    return [q + 1] * extra + [q] * (r - extra)


def _pair_blocks_sparse(p: BipartitePair, r: int) -> tuple[NestedOrder, list[tuple[int, list[int]]], list[tuple[int, list[int]]]]:
    """Nonempty blocks only, as ``(index, members)`` with 0-based indices.

    X blocks are consecutive intervals of the nested order; Y block ``i``
    (``i < r``) is ``N_Y`` of the last vertex of X block ``i`` minus that of
    block ``i - 1``, and block ``r`` is ``Y`` minus ``N_Y`` of the last vertex.
    ``r`` may be huge, so empty blocks are never materialised.
    """
    res = nested_order(p)
    if isinstance(res, M2Witness):
        raise PreconditionError("pair contains an induced M2", res)
    order = res.order
    m = len(order)
    q, extra = divmod(m, r)
    x_blocks: list[tuple[int, list[int]]] = []
    y_blocks: list[tuple[int, list[int]]] = []
    prev_nbr = 0
    pos = 0
    # blocks 0..extra-1 have q+1 members, the rest q; only the first min(r, m) can be nonempty
    nonempty = r if q > 0 else extra
    for i in range(nonempty):
        size = q + 1 if i < extra else q
        members = list(order[pos:pos + size])
        pos += size
        x_blocks.append((i, members))
        cur = p.nbr(members[-1])
        ys = list(bits(cur & ~prev_nbr))
        if ys:
            y_blocks.append((i, ys))
        prev_nbr = cur
    rest = list(bits(p.y_mask & ~prev_nbr))
    if rest:
        y_blocks.append((r, rest))
    return res, x_blocks, y_blocks


def homog_pair_partition(p: BipartitePair, r: int) -> tuple[list[list[int]], list[list[int]]]:
    """Split X into ``r`` consecutive chain intervals and Y into ``r + 1`` parts
    so that ``(X_i, Y_j)`` is complete or empty whenever ``i != j``.

    Returns ``(x_blocks, y_blocks)`` as lists of length ``r`` and ``r + 1``;
    blocks may be empty when ``r`` exceeds ``|X|``.
    """
    if r < 1:
        raise ValueError("r must be a positive integer")
    _, xs, ys = _pair_blocks_sparse(p, r)
    x_blocks: list[list[int]] = [[] for _ in range(r)]
    y_blocks: list[list[int]] = [[] for _ in range(r + 1)]
    for i, members in xs:
        x_blocks[i] = sorted(members)
    for i, members in ys:
        y_blocks[i] = members
    return x_blocks, y_blocks


def _suffix_assignment(nbrs: list[int], order: list[int]) -> tuple[int, list[int]]:
    """For a fixed order of X, each y picks the suffix closest to ``N_X(y)``.

    Returns the total cost and, per y, the chosen suffix length.
    """
    m = len(order)
    total = 0
    choice = []
    for nm in nbrs:
        cost = nm.bit_count()  # empty suffix
        best, best_k = cost, 0
        for k in range(1, m + 1):
            cost += -1 if nm >> order[m - k] & 1 else 1
            if cost < best:
                best, best_k = cost, k
        total += best
        choice.append(best_k)
    return total, choice


def _exact_order(nbrs: list[int], xs: list[int]) -> list[int]:
    """Order of X minimising the suffix-fit cost, by depth-first search.

    The chain is built from the top: after committing the suffix ``S``, a
    y's cost on any later (larger) suffix is at least ``|S \\ N_X(y)|``,
    which gives an admissible bound against the best found so far.
    """
    m = len(xs)
    # vertices with identical columns are interchangeable; branch on one representative
    column = {x: tuple(nm >> x & 1 for nm in nbrs) for x in xs}
    best_total, _ = _suffix_assignment(nbrs, xs)
    best_order = list(xs)
    tail: list[int] = []

    def dfs(suffix: int, best_y: list[int]) -> None:
        nonlocal best_total, best_order
        lower = sum(min(b, (suffix & ~nm).bit_count()) for b, nm in zip(best_y, nbrs))
        if lower >= best_total:
            return
        if len(tail) == m:
            total = sum(best_y)
            if total < best_total:
                best_total = total
                best_order = tail[::-1]
            return
        tried = set()
        for x in xs:
            if suffix >> x & 1 or column[x] in tried:
                continue
            tried.add(column[x])
            s2 = suffix | (1 << x)
            tail.append(x)
            dfs(s2, [min(b, (nm ^ s2).bit_count()) for b, nm in zip(best_y, nbrs)])
            tail.pop()

    dfs(0, [nm.bit_count() for nm in nbrs])
    return best_order


@dataclass(frozen=True)
class M2EditResult:
    count: int
    edits: EditSet
    mode: str  # "exact" or "heuristic"
    order: tuple[int, ...]


def min_edits_to_m2free(
    p: BipartitePair, *, exact_cap: int = EXACT_ORDER_CAP, heuristic: bool = False
) -> M2EditResult:
    """Fewest cross-pair toggles making ``p`` induced-M2-free.

    A pair is M2-free iff some order of X makes every ``N_X(y)`` a suffix,
    so the exact value is a minimum over orders of per-y best-suffix costs.
    Exact mode is factorial in ``|X|`` and refuses ``|X| > exact_cap``
    unless ``heuristic=True`` (degree order, no optimality claim).
    """
    xs = list(p.x)
    x_mask = mask_of(xs)
    nbrs = [p.host.adj[y] & x_mask for y in p.y]
    if len(xs) <= exact_cap:
        order, mode = _exact_order(nbrs, xs), "exact"
    elif heuristic:
        order = sorted(xs, key=lambda v: (p.nbr(v).bit_count(), v))
        mode = "heuristic"
    else:
        raise BudgetExceeded(f"|X|={len(xs)} exceeds exact-order cap {exact_cap}")
    total, choice = _suffix_assignment(nbrs, order)
    toggles = []
    m = len(order)
    for y, nm, k in zip(p.y, nbrs, choice):
        target = mask_of(order[m - k:])
        for x in bits(nm ^ target):
            u, v = norm_pair(x, y)
            toggles.append((u, v, DELETE if nm >> x & 1 else ADD))
    edits = EditSet(tuple(sorted(toggles)))
    assert len(edits) == total
    return M2EditResult(total, edits, mode, tuple(order))
