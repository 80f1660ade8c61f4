"""Exact counting and search kernels on bitmask graphs.

Everything here is exact. The exponential routines (``count_induced_cl``,
``iter_induced_cycles``) take explicit caps and raise ``BudgetExceeded``
rather than silently running forever.
"""

from __future__ import annotations

from collections import deque
from typing import Iterable, Iterator

from .errors import BudgetExceeded
from .graph import Graph, bits, mask_of

EXACT_CYCLE_LEN_CAP = 8
EXACT_CYCLE_N_CAP = 64


def _pairs_nonadjacent_within(adj: tuple[int, ...], mask: int) -> int:
    c = mask.bit_count()
    e = sum((adj[w] & mask).bit_count() for w in bits(mask)) // 2
    return c * (c - 1) // 2 - e


def count_induced_c4(g: Graph) -> int:
    """Number of 4-vertex sets inducing a 4-cycle.

    Each induced C4 has exactly two diagonals, both non-edges, and the other
    diagonal is a non-adjacent pair inside the common neighbourhood. So the
    count is half the sum, over non-adjacent pairs, of non-adjacent pairs in
    their common neighbourhood.
    """
    adj = g.adj
    full = g.full_mask
    total = 0
    for u in range(g.n):
        au = adj[u]
        for v in bits(full & ~au & ~((1 << (u + 1)) - 1)):
            common = au & adj[v]
            if common & (common - 1):
                total += _pairs_nonadjacent_within(adj, common)
    return total // 2


def iter_induced_c4(g: Graph) -> Iterator[tuple[int, int, int, int]]:
    """Yield each induced C4 once as a cyclic order ``(a, b, c, d)``.

    ``a`` is the minimum vertex and ``b < d``. Output is sorted by
    ``(a, c, b, d)``, i.e. grouped by the diagonal through the minimum.
    """
    adj = g.adj
    full = g.full_mask
    for a in range(g.n):
        above = full & ~((1 << (a + 1)) - 1)
        for c in bits(above & ~adj[a]):
            common = adj[a] & adj[c] & above
            for b in bits(common):
                for d in bits(common & ~adj[b] & ~((1 << (b + 1)) - 1)):
                    yield (a, b, c, d)


def find_induced_c4(g: Graph) -> tuple[int, int, int, int] | None:
    return next(iter_induced_c4(g), None)


def is_induced_cycle(g: Graph, cycle: Iterable[int]) -> bool:
    """True iff the vertices, in the given cyclic order, induce exactly that cycle."""
    cyc = list(cycle)
    k = len(cyc)
    if k < 3 or len(set(cyc)) != k or any(not 0 <= v < g.n for v in cyc):
        return False
    cm = mask_of(cyc)
    for i, v in enumerate(cyc):
        want = (1 << cyc[i - 1]) | (1 << cyc[(i + 1) % k])
        if g.adj[v] & cm != want:
            return False
    return True


def mcs_order(g: Graph) -> list[int]:
    """Maximum-cardinality search visit order (ties broken by lowest index)."""
    weight = [0] * g.n
    left = g.full_mask
    order = []
    while left:
        best = max(bits(left), key=lambda v: (weight[v], -v))
        order.append(best)
        left &= ~(1 << best)
        for u in bits(g.adj[best] & left):
            weight[u] += 1
    return order


def peo_failure(g: Graph) -> tuple[int, int, int] | None:
    """Test the reversed MCS order as a perfect elimination ordering.

    Returns ``None`` when it is one (the graph is chordal), else a triple
    ``(v, u, w)``: ``u`` and ``w`` are later neighbours of ``v`` in the
    elimination order and ``u``, ``w`` are non-adjacent.
    """
    elim = mcs_order(g)[::-1]
    pos = {v: i for i, v in enumerate(elim)}
    for v in elim:
        later = [u for u in bits(g.adj[v]) if pos[u] > pos[v]]
        if len(later) < 2:
            continue
        parent = min(later, key=pos.__getitem__)
        rest = mask_of(later) & ~(1 << parent)
        missing = rest & ~g.adj[parent]
        if missing:
            return v, parent, (missing & -missing).bit_length() - 1
    return None


def is_chordal(g: Graph) -> bool:
    return peo_failure(g) is None


def _cycle_through(g: Graph, v: int, u: int, w: int) -> tuple[int, ...] | None:
    # shortest u-w path whose interior avoids N[v]; with v it closes an induced cycle
    allowed = g.full_mask & ~(g.adj[v] | 1 << v) | (1 << w)
    prev = {u: -1}
    queue = deque([u])
    while queue:
        x = queue.popleft()
        if x == w:
            break
        for y in bits(g.adj[x] & allowed):
            if y not in prev:
                prev[y] = x
                queue.append(y)
    if w not in prev:
        return None
    path = []
    x = w
    while x != -1:
        path.append(x)
        x = prev[x]
    return (v, *reversed(path))


def find_induced_cycle_geq4(g: Graph) -> tuple[int, ...] | None:
    """An induced cycle of length >= 4 in cyclic order, or ``None`` if chordal.

    The failing triple of the elimination-order test is tried first; if it
    does not close an induced cycle, every vertex with a non-adjacent pair of
    neighbours is tried, which is complete.
    """
    fail = peo_failure(g)
    if fail is None:
        return None
    cyc = _cycle_through(g, *fail)
    if cyc is None:
        for v in range(g.n):
            nb = list(bits(g.adj[v]))
            for i, u in enumerate(nb):
                for w in bits(mask_of(nb[i + 1:]) & ~g.adj[u]):
                    cyc = _cycle_through(g, v, u, w)
                    if cyc is not None:
                        break
                if cyc is not None:
                    break
            if cyc is not None:
                break
    if cyc is None or not is_induced_cycle(g, cyc) or len(cyc) < 4:
        raise AssertionError("elimination test failed but no induced cycle was extracted")
    return cyc


def iter_induced_cycles(g: Graph, lengths: Iterable[int]) -> Iterator[tuple[int, ...]]:
    """Yield every induced cycle whose length is in ``lengths`` exactly once.

    Cycles come out as ``(s, p1, ..., pk)`` with ``s`` the minimum vertex and
    ``p1 < pk``. Enumeration grows induced paths from ``s`` over vertices
    above ``s``; a vertex adjacent to ``s`` can only close the cycle.
    """
    wanted = set(lengths)
    if not wanted:
        return
    max_len = max(wanted)
    adj = g.adj
    full = g.full_mask

    def grow(s, p1, path, inner, above):
        last = path[-1]
        length = len(path) + 2  # cycle length if x closes it
        for x in bits(adj[last] & above & ~inner):
            if adj[x] >> s & 1:
                if length in wanted and x > p1:
                    yield (s, *path, x)
            elif length < max_len:
                path.append(x)
                yield from grow(s, p1, path, inner | adj[last] | (1 << last), above)
                path.pop()

    for s in range(g.n):
        above = full & ~((1 << (s + 1)) - 1)
        for p1 in bits(adj[s] & above):
            if max_len < 3:
                break
            yield from grow(s, p1, [p1], (1 << s) | (1 << p1), above)


def count_induced_cl(
    g: Graph,
    length: int,
    *,
    max_length: int = EXACT_CYCLE_LEN_CAP,
    max_n: int = EXACT_CYCLE_N_CAP,
) -> int:
    """Exact number of ``length``-vertex sets inducing a cycle."""
    if length < 3:
        raise ValueError("cycle length must be at least 3")
    if length > max_length or g.n > max_n:
        raise BudgetExceeded(
            f"induced C_{length} count on n={g.n} exceeds cap (length<={max_length}, n<={max_n})"
        )
    if length > g.n:
        return 0
    return sum(1 for _ in iter_induced_cycles(g, [length]))


def _color_order(adj: tuple[int, ...], cand: int) -> tuple[list[int], list[int]]:
    # greedy colouring; vertices come out with nondecreasing colour number
    order, colors = [], []
    uncolored = cand
    color = 0
    while uncolored:
        color += 1
        q = uncolored
        while q:
            v = (q & -q).bit_length() - 1
            q &= ~adj[v] & ~(1 << v)
            uncolored &= ~(1 << v)
            order.append(v)
            colors.append(color)
    return order, colors


def max_clique(g: Graph) -> tuple[int, tuple[int, ...]]:
    """Exact maximum clique by branch and bound with a colouring bound."""
    adj = g.adj
    best = [0, 0]  # size, mask

    def expand(size: int, clique: int, cand: int) -> None:
        order, colors = _color_order(adj, cand)
        for i in range(len(order) - 1, -1, -1):
            if size + colors[i] <= best[0]:
                return
            v = order[i]
            nxt = cand & adj[v]
            if nxt:
                expand(size + 1, clique | (1 << v), nxt)
            elif size + 1 > best[0]:
                best[0], best[1] = size + 1, clique | (1 << v)
            cand &= ~(1 << v)

    if g.n:
        expand(0, 0, g.full_mask)
    witness = tuple(bits(best[1]))
    return best[0], witness


def is_clique(g: Graph, vertices: Iterable[int]) -> bool:
    vm = mask_of(vertices)
    return all((g.adj[v] | (1 << v)) & vm == vm for v in bits(vm))


def is_independent(g: Graph, vertices: Iterable[int]) -> bool:
    vm = mask_of(vertices)
    return all(not g.adj[v] & vm for v in bits(vm))
