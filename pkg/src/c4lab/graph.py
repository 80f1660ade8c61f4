"""Undirected simple graphs stored as row bitmasks, plus edit sets.

Row ``adj[v]`` is a Python int whose bit ``u`` is set iff ``{u, v}`` is an
edge. Common-neighbourhood intersections and membership tests are then a
single ``&`` on machine-word-sized limbs, which is what the counting kernels
lean on.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Sequence

from .errors import DegenerateSetError, EditConsistencyError

Pair = tuple[int, int]

ADD = "add"
DELETE = "delete"


def bits(mask: int) -> Iterator[int]:
    """Yield the set bit positions of ``mask`` in increasing order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def mask_of(vertices: Iterable[int]) -> int:
    m = 0
    for v in vertices:
        m |= 1 << v
    return m


def vertex_set(vertices: Iterable[int], n: int | None = None) -> tuple[int, ...]:
    """Normalise to a sorted duplicate-free tuple, range-checked against ``n``."""
    vs = tuple(sorted(set(int(v) for v in vertices)))
    if vs and vs[0] < 0:
        raise ValueError(f"negative vertex index {vs[0]}")
    if n is not None and vs and vs[-1] >= n:
        raise ValueError(f"vertex {vs[-1]} out of range for n={n}")
    return vs


def norm_pair(u: int, v: int) -> Pair:
    if u == v:
        raise ValueError(f"self-loop pair ({u}, {v})")
    return (u, v) if u < v else (v, u)


@dataclass(frozen=True)
class Graph:
    """Immutable simple graph on vertices ``0..n-1``."""

    n: int
    adj: tuple[int, ...]

    def __post_init__(self):
        if self.n < 0 or len(self.adj) != self.n:
            raise ValueError("adjacency rows must match n")
        full = (1 << self.n) - 1
        for v, row in enumerate(self.adj):
            if row & ~full or row >> v & 1:
                raise ValueError(f"bad adjacency row for vertex {v}")
            for u in bits(row):
                if not self.adj[u] >> v & 1:
                    raise ValueError(f"asymmetric adjacency between {u} and {v}")

    @classmethod
    def _trusted(cls, n: int, adj: tuple[int, ...]) -> "Graph":
        # internal constructions are symmetric by construction; skip the O(m) check
        g = object.__new__(cls)
        object.__setattr__(g, "n", n)
        object.__setattr__(g, "adj", adj)
        return g

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[Sequence[int]]) -> "Graph":
        rows = [0] * n
        for e in edges:
            u, v = norm_pair(int(e[0]), int(e[1]))
            if v >= n:
                raise ValueError(f"edge ({u}, {v}) out of range for n={n}")
            rows[u] |= 1 << v
            rows[v] |= 1 << u
        return cls._trusted(n, tuple(rows))

    @classmethod
    def empty(cls, n: int) -> "Graph":
        return cls._trusted(n, (0,) * n)

    @property
    def full_mask(self) -> int:
        return (1 << self.n) - 1

    @property
    def m(self) -> int:
        return sum(row.bit_count() for row in self.adj) // 2

    @property
    def edges(self) -> list[Pair]:
        return [(u, v) for u in range(self.n) for v in bits(self.adj[u] >> (u + 1) << (u + 1))]

    def adjacent(self, u: int, v: int) -> bool:
        return bool(self.adj[u] >> v & 1)

    def neighbors(self, v: int) -> list[int]:
        return list(bits(self.adj[v]))

    def degree(self, v: int) -> int:
        return self.adj[v].bit_count()

    def induced_subgraph(self, vertices: Iterable[int]) -> tuple["Graph", tuple[int, ...]]:
        """Return ``(H, labels)`` where vertex ``i`` of ``H`` is ``labels[i]`` here."""
        labels = vertex_set(vertices, self.n)
        index = {v: i for i, v in enumerate(labels)}
        rows = []
        for v in labels:
            row = 0
            for u in bits(self.adj[v]):
                j = index.get(u)
                if j is not None:
                    row |= 1 << j
            rows.append(row)
        return Graph._trusted(len(labels), tuple(rows)), labels

    def complement(self) -> "Graph":
        full = self.full_mask
        return Graph._trusted(self.n, tuple(full & ~row & ~(1 << v) for v, row in enumerate(self.adj)))

    def toggled(self, pairs: Iterable[Pair]) -> "Graph":
        rows = list(self.adj)
        for u, v in pairs:
            rows[u] ^= 1 << v
            rows[v] ^= 1 << u
        return Graph._trusted(self.n, tuple(rows))

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, m={self.m})"


def edge_count_within(g: Graph, s: Iterable[int]) -> int:
    """Number of edges with both endpoints in ``s``."""
    sm = mask_of(s)
    return sum((g.adj[v] & sm).bit_count() for v in bits(sm)) // 2


def edge_count_between(g: Graph, a: Iterable[int], b: Iterable[int]) -> int:
    bm = mask_of(b)
    return sum((g.adj[v] & bm).bit_count() for v in set(a))


def density(g: Graph, s: Iterable[int]) -> Fraction:
    """Exact edge density ``e(s) / C(|s|, 2)``."""
    vs = vertex_set(s, g.n)
    k = len(vs)
    if k < 2:
        raise DegenerateSetError(f"density needs at least 2 vertices, got {k}")
    return Fraction(edge_count_within(g, vs), k * (k - 1) // 2)


def homogeneity_type(g: Graph, a: Iterable[int], b: Iterable[int]) -> str | None:
    """``"complete"`` / ``"empty"`` if the bipartite graph between ``a`` and
    ``b`` is so, else ``None``. A pair with an empty side counts as empty."""
    bm = mask_of(b)
    a = list(a)
    if not a or not bm:
        return "empty"
    rows = [g.adj[v] & bm for v in a]
    if all(r == 0 for r in rows):
        return "empty"
    if all(r == bm for r in rows):
        return "complete"
    return None


@dataclass(frozen=True)
class EditSet:
    """Pair toggles relative to some base graph.

    ``toggles`` is a sorted tuple of ``(u, v, direction)`` with ``u < v`` and
    direction ``"add"`` or ``"delete"``; each pair appears once.
    """

    toggles: tuple[tuple[int, int, str], ...] = ()

    def __post_init__(self):
        seen = set()
        for u, v, d in self.toggles:
            if not u < v:
                raise ValueError(f"toggle pair ({u}, {v}) not normalised")
            if d not in (ADD, DELETE):
                raise ValueError(f"unknown toggle direction {d!r}")
            if (u, v) in seen:
                raise ValueError(f"pair ({u}, {v}) toggled twice")
            seen.add((u, v))

    @classmethod
    def from_toggles(cls, toggles: Iterable[tuple[int, int, str]]) -> "EditSet":
        return cls(tuple(sorted((*norm_pair(u, v), d) for u, v, d in toggles)))

    @classmethod
    def for_pairs(cls, g: Graph, pairs: Iterable[Pair]) -> "EditSet":
        """Toggle each pair, direction read off ``g``."""
        out = []
        for u, v in set(norm_pair(*p) for p in pairs):
            out.append((u, v, DELETE if g.adjacent(u, v) else ADD))
        return cls(tuple(sorted(out)))

    @classmethod
    def diff(cls, base: Graph, target: Graph) -> "EditSet":
        if base.n != target.n:
            raise ValueError("graphs differ in vertex count")
        out = []
        for u in range(base.n):
            delta = (base.adj[u] ^ target.adj[u]) >> (u + 1) << (u + 1)
            for v in bits(delta):
                out.append((u, v, DELETE if base.adj[u] >> v & 1 else ADD))
        return cls(tuple(out))

    def __len__(self) -> int:
        return len(self.toggles)

    def __iter__(self):
        return iter(self.toggles)

    def pairs(self) -> set[Pair]:
        return {(u, v) for u, v, _ in self.toggles}

    @property
    def adds(self) -> list[Pair]:
        return [(u, v) for u, v, d in self.toggles if d == ADD]

    @property
    def deletes(self) -> list[Pair]:
        return [(u, v) for u, v, d in self.toggles if d == DELETE]

    def reverse(self) -> "EditSet":
        flip = {ADD: DELETE, DELETE: ADD}
        return EditSet(tuple((u, v, flip[d]) for u, v, d in self.toggles))

    def union(self, other: "EditSet") -> "EditSet":
        return EditSet.from_toggles(self.toggles + other.toggles)

    def check(self, g: Graph) -> None:
        for u, v, d in self.toggles:
            if v >= g.n:
                raise EditConsistencyError(f"pair ({u}, {v}) out of range")
            present = g.adjacent(u, v)
            if d == DELETE and not present:
                raise EditConsistencyError(f"cannot delete absent edge ({u}, {v})")
            if d == ADD and present:
                raise EditConsistencyError(f"cannot add present edge ({u}, {v})")

    def to_json(self) -> list[list]:
        return [[u, v, d] for u, v, d in self.toggles]


def apply_edits(g: Graph, e: EditSet) -> Graph:
    """Return ``g`` with every toggle of ``e`` applied (validated first)."""
    e.check(g)
    return g.toggled(e.pairs())
