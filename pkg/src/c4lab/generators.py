"""Seeded graph generators used as test corpora and by the demos."""

from __future__ import annotations

from typing import Iterable, Sequence

import numpy as np

from .graph import Graph


def as_rng(seed) -> np.random.Generator:
    """Accept an int seed or an existing Generator (used as-is, never copied)."""
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def random_graph(n: int, p: float, seed) -> Graph:
    """G(n, p): each pair present independently, pairs drawn in lexicographic order."""
    if not 0 <= p <= 1:
        raise ValueError(f"p must lie in [0, 1], got {p}")
    rng = as_rng(seed)
    draws = rng.random(n * (n - 1) // 2) < p
    edges = []
    k = 0
    for u in range(n):
        for v in range(u + 1, n):
            if draws[k]:
                edges.append((u, v))
            k += 1
    return Graph.from_edges(n, edges)


def complete_graph(n: int) -> Graph:
    return Graph.from_edges(n, [(u, v) for u in range(n) for v in range(u + 1, n)])


def cycle_graph(n: int) -> Graph:
    if n < 3:
        raise ValueError("a cycle needs at least 3 vertices")
    return Graph.from_edges(n, [(i, (i + 1) % n) for i in range(n)])


def path_graph(n: int) -> Graph:
    return Graph.from_edges(n, [(i, i + 1) for i in range(n - 1)])


def complete_bipartite(a: int, b: int) -> Graph:
    return Graph.from_edges(a + b, [(u, a + v) for u in range(a) for v in range(b)])


def disjoint_union(*graphs: Graph) -> Graph:
    edges, offset = [], 0
    for h in graphs:
        edges.extend((u + offset, v + offset) for u, v in h.edges)
        offset += h.n
    return Graph.from_edges(offset, edges)


def from_blocks(n: int, cliques: Iterable[Sequence[int]], extra: Iterable[Sequence[int]] = ()) -> Graph:
    """Union of cliques on the given blocks plus explicit extra edges."""
    edges = set()
    for block in cliques:
        block = list(block)
        for i, u in enumerate(block):
            for v in block[i + 1:]:
                edges.add((min(u, v), max(u, v)))
    for u, v in extra:
        edges.add((min(u, v), max(u, v)))
    return Graph.from_edges(n, edges)


def random_split_graph(n_clique: int, n_indep: int, p: float, seed) -> Graph:
    """Clique on ``0..n_clique-1``, independent set after it, random cross edges."""
    rng = as_rng(seed)
    cross = rng.random((n_clique, n_indep)) < p
    extra = [(u, n_clique + v) for u in range(n_clique) for v in range(n_indep) if cross[u, v]]
    return from_blocks(n_clique + n_indep, [range(n_clique)], extra)


def half_graph_pair(m: int) -> tuple[Graph, list[int], list[int]]:
    """Half graph on ``x_i = i``, ``y_j = m + j`` with ``N(x_i) = {y_0..y_i}``."""
    xs = list(range(m))
    ys = list(range(m, 2 * m))
    edges = [(xs[i], ys[j]) for i in range(m) for j in range(i + 1)]
    return Graph.from_edges(2 * m, edges), xs, ys


def random_chain_cliques(sizes: Sequence[int], seed, *, mix: float = 0.5) -> tuple[Graph, list[list[int]]]:
    """Disjoint cliques whose pairwise bipartite graphs are induced-M2-free.

    Every vertex gets a random threshold per ordered block pair and is joined
    to the prefix of the other block below that threshold, which keeps each
    pair's neighbourhoods nested. ``mix`` is the chance a pair is a genuine
    threshold graph rather than complete or empty.
    """
    rng = as_rng(seed)
    blocks, start = [], 0
    for s in sizes:
        blocks.append(list(range(start, start + s)))
        start += s
    extra = []
    for i in range(len(blocks)):
        for j in range(i + 1, len(blocks)):
            xi, xj = blocks[i], blocks[j]
            roll = rng.random()
            if roll < mix:
                # random thresholds, neighbourhoods are prefixes of a random order of xj
                perm = [xj[t] for t in rng.permutation(len(xj))]
                for u in xi:
                    t = int(rng.integers(0, len(xj) + 1))
                    extra.extend((u, w) for w in perm[:t])
            elif roll < mix + (1 - mix) / 2:
                extra.extend((u, w) for u in xi for w in xj)
    return from_blocks(start, blocks, extra), blocks


def random_split_like(clique_sizes: Sequence[int], n_indep: int, p: float, seed) -> tuple[Graph, list[int], list[int]]:
    """Disjoint cliques ``X`` (a chordal side), independent ``Y`` after them, random X-Y edges.

    Returns ``(g, x, y)``. Unlike a split graph, two cliques plus two
    common Y-neighbours give induced C4s.
    """
    rng = as_rng(seed)
    blocks, start = [], 0
    for s in clique_sizes:
        blocks.append(range(start, start + s))
        start += s
    x = list(range(start))
    y = list(range(start, start + n_indep))
    cross = rng.random((len(x), n_indep)) < p
    extra = [(u, start + v) for u in x for v in range(n_indep) if cross[u, v]]
    return from_blocks(start + n_indep, blocks, extra), x, y


def random_chordal(n: int, seed, *, p: float = 0.5) -> Graph:
    """Chordal by construction: each new vertex joins a random clique of earlier ones.

    The clique grows from a random earlier vertex, taking each common
    neighbour with probability ``p``; the insertion order reversed is a
    perfect elimination order.
    """
    rng = as_rng(seed)
    adj = [0] * n
    for v in range(1, n):
        if rng.random() < 0.15:
            continue  # start a new component now and then
        u = int(rng.integers(v))
        clique = 1 << u
        cand = adj[u]
        for w in (int(t) for t in rng.permutation(v)):
            if cand >> w & 1 and rng.random() < p:
                clique |= 1 << w
                cand &= adj[w]
        adj[v] = clique
        for w in range(v):
            if clique >> w & 1:
                adj[w] |= 1 << v
    return Graph(n, tuple(adj))
