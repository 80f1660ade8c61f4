"""Brute-force references, written for obviousness rather than speed.

None of these share code paths with the library beyond the ``Graph``
container itself.
"""

from __future__ import annotations

import itertools
from collections import deque
from math import comb

from c4lab.graph import Graph


def adjacent(g: Graph, u: int, v: int) -> bool:
    return bool(g.adj[u] >> v & 1)


def edges_of(g: Graph, vs) -> int:
    return sum(1 for a, b in itertools.combinations(vs, 2) if adjacent(g, a, b))


def induces_cycle(g: Graph, vs) -> bool:
    """``vs`` (any order) induces a single cycle through all of it."""
    vs = list(vs)
    if len(vs) < 3:
        return False
    deg = {v: sum(adjacent(g, v, w) for w in vs if w != v) for v in vs}
    if any(d != 2 for d in deg.values()):
        return False
    # 2-regular: one cycle iff connected
    seen, stack = {vs[0]}, [vs[0]]
    while stack:
        v = stack.pop()
        for w in vs:
            if w not in seen and adjacent(g, v, w):
                seen.add(w)
                stack.append(w)
    return len(seen) == len(vs)


def c4_count(g: Graph) -> int:
    return sum(1 for s in itertools.combinations(range(g.n), 4) if induces_cycle(g, s))


def cycle_count(g: Graph, length: int) -> int:
    return sum(1 for s in itertools.combinations(range(g.n), length) if induces_cycle(g, s))


def has_long_induced_cycle(g: Graph) -> bool:
    return any(induces_cycle(g, s) for size in range(4, g.n + 1) for s in itertools.combinations(range(g.n), size))


def max_clique_size(g: Graph) -> int:
    best = 0
    for size in range(1, g.n + 1):
        if any(edges_of(g, s) == comb(size, 2) for s in itertools.combinations(range(g.n), size)):
            best = size
        else:
            break
    return best


def all_graphs(n: int):
    pairs = list(itertools.combinations(range(n), 2))
    for code in range(1 << len(pairs)):
        yield Graph.from_edges(n, [p for i, p in enumerate(pairs) if code >> i & 1])


def m2_exists(g: Graph, xs, ys) -> bool:
    """Explicit quadruple search."""
    for x, x2 in itertools.combinations(xs, 2):
        for y, y2 in itertools.permutations(ys, 2):
            if adjacent(g, x, y) and adjacent(g, x2, y2) and not adjacent(g, x, y2) and not adjacent(g, x2, y):
                return True
    return False


def m2_count(g: Graph, xs, ys) -> int:
    quads = set()
    for x, x2 in itertools.permutations(xs, 2):
        for y, y2 in itertools.permutations(ys, 2):
            if adjacent(g, x, y) and adjacent(g, x2, y2) and not adjacent(g, x, y2) and not adjacent(g, x2, y):
                quads.add(frozenset((x, x2, y, y2)))
    return len(quads)


def min_m2_edits_by_permutation(g: Graph, xs, ys) -> int:
    """Minimum over orders of X of the per-y best suffix cost."""
    best = None
    for order in itertools.permutations(xs):
        total = 0
        for y in ys:
            nbr = {x for x in xs if adjacent(g, x, y)}
            total += min(len(nbr ^ set(order[len(order) - k:])) for k in range(len(order) + 1))
        best = total if best is None else min(best, total)
    return best


def min_m2_edits_bruteforce(g: Graph, xs, ys, limit: int = 3):
    """Smallest edit set of size at most ``limit`` over cross pairs, or ``None``."""
    cross = [(min(x, y), max(x, y)) for x in xs for y in ys]
    for size in range(limit + 1):
        for pairs in itertools.combinations(cross, size):
            if not m2_exists(g.toggled(pairs), xs, ys):
                return size
    return None


def is_homogeneous(g: Graph, a, b) -> bool:
    vals = {adjacent(g, u, v) for u in a for v in b}
    return len(vals) <= 1


def deficiency(g: Graph, blocks) -> int:
    return sum(len(a) * len(b) for a, b in itertools.combinations(blocks, 2) if not is_homogeneous(g, a, b))


def edit_distance_table(n: int, free) -> dict[tuple[int, ...], int]:
    """Distance from every ``n``-vertex graph to the property, by BFS over the edit hypercube."""
    pairs = list(itertools.combinations(range(n), 2))
    graphs = {}
    dist = {}
    queue = deque()
    for code in range(1 << len(pairs)):
        g = Graph.from_edges(n, [p for i, p in enumerate(pairs) if code >> i & 1])
        graphs[code] = g
        if free(g):
            dist[code] = 0
            queue.append(code)
    while queue:
        code = queue.popleft()
        for i in range(len(pairs)):
            nxt = code ^ (1 << i)
            if nxt not in dist:
                dist[nxt] = dist[code] + 1
                queue.append(nxt)
    return {graphs[c].adj: d for c, d in dist.items()}


def structure_violations(sr) -> list[str]:
    """Names of the structure clauses that ``sr`` breaks, rechecked pair by pair."""
    g, gp, n = sr.g, sr.g_prime, sr.g.n
    zs = set(sr.z)
    bad = []
    for b in sr.x_blocks.blocks:
        core = [v for v in b if v not in zs]
        if edges_of(gp, core) != comb(len(core), 2):
            bad.append("x_blocks_cliques")
            break
    if edges_of(gp, sr.y) != 0:
        bad.append("y_independent")
    if not len(sr.z) < sr.alpha * n:
        bad.append("z_small")
    if any(adjacent(gp, z, v) for z in sr.z for v in range(n) if v != z):
        bad.append("z_isolated")
    q, ws = sr.q_blocks, sr.w_subsets
    x_minus_z = sorted(set(sr.x) - zs)
    if sorted(v for b in q for v in b) != x_minus_z:
        bad.append("q_covers_x_minus_z")
    if any(not any(set(b) <= set(x) for x in sr.x_blocks.blocks) for b in q):
        bad.append("q_refines_x")
    if deficiency(gp, q) > sr.alpha * n * n:
        bad.append("q_deficiency")
    if len(ws) != len(q) or any(not w or not set(w) <= set(b) for w, b in zip(ws, q)):
        bad.append("w_inside_q")
    if any(not is_homogeneous(gp, a, b) for a, b in itertools.combinations(ws, 2)):
        bad.append("w_homogeneous")
    diff = [(u, v) for u, v in itertools.combinations(range(n), 2) if adjacent(g, u, v) != adjacent(gp, u, v)]
    if not len(diff) < (2 * sr.alpha + sr.gamma) * n * n:
        bad.append("edits_total")
    inner = set(x_minus_z)
    if not sum(1 for u, v in diff if u in inner and v in inner) < sr.gamma * n * n:
        bad.append("edits_inside_x")
    return bad
