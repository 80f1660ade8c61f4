"""Homogeneous refinements of clique systems.

A partition is delta-homogeneous when the pairs of blocks that are neither
complete nor empty to each other cover at most ``delta * n**2`` vertex
pairs (summing ``|U| * |V|``). Starting from disjoint cliques whose pairwise
bipartite graphs are induced-M2-free, ``delta_homog_refinement`` builds such
a partition from per-pair chain intervals, and ``strong_homog_partition``
then selects large blocks ``Q_i`` with representatives ``W_i`` that are
pairwise homogeneous.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import PreconditionError, StageFailure
from .generators import as_rng
from .graph import Graph, homogeneity_type, vertex_set
from .kernels import is_clique
from .m2free import BipartitePair, _pair_blocks_sparse, find_induced_m2

DEFAULT_MAX_RETRIES = 64


@dataclass(frozen=True)
class Partition:
    """Ordered disjoint blocks whose union is ``ground``. Empty blocks are dropped."""

    ground: tuple[int, ...]
    blocks: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        blocks = tuple(vertex_set(b) for b in self.blocks if len(b))
        ground = vertex_set(self.ground)
        seen: set[int] = set()
        for b in blocks:
            if seen & set(b):
                raise ValueError("partition blocks overlap")
            seen.update(b)
        if seen != set(ground):
            raise ValueError("blocks do not cover the ground set exactly")
        object.__setattr__(self, "blocks", blocks)
        object.__setattr__(self, "ground", ground)

    @classmethod
    def of(cls, blocks: Iterable[Iterable[int]]) -> "Partition":
        blocks = [tuple(b) for b in blocks]
        return cls(tuple(v for b in blocks for v in b), tuple(blocks))

    def __len__(self) -> int:
        return len(self.blocks)

    def block_of(self) -> dict[int, int]:
        return {v: i for i, b in enumerate(self.blocks) for v in b}

    def to_json(self) -> list[list[int]]:
        return [list(b) for b in self.blocks]


def refines(fine: Partition, coarse: Partition) -> bool:
    """Every block of ``fine`` sits inside one block of ``coarse`` (same ground)."""
    if set(fine.ground) != set(coarse.ground):
        return False
    owner = coarse.block_of()
    return all(len({owner[v] for v in b}) == 1 for b in fine.blocks)


def is_equipartition(blocks: Sequence[Sequence[int]]) -> bool:
    sizes = [len(b) for b in blocks]
    return not sizes or max(sizes) - min(sizes) <= 1


@dataclass(frozen=True)
class HomogeneityLedger:
    non_homogeneous_pairs: tuple[tuple[int, int], ...]
    deficiency: int
    block_sizes: tuple[int, ...] = field(repr=False, default=())

    def recompute(self) -> int:
        return sum(self.block_sizes[i] * self.block_sizes[j] for i, j in self.non_homogeneous_pairs)


def homogeneity_deficiency(g: Graph, p: Partition) -> HomogeneityLedger:
    """List the block pairs that are neither complete nor empty, with ``sum |U||V|``."""
    bad = []
    total = 0
    for i, j in itertools.combinations(range(len(p.blocks)), 2):
        if homogeneity_type(g, p.blocks[i], p.blocks[j]) is None:
            bad.append((i, j))
            total += len(p.blocks[i]) * len(p.blocks[j])
    return HomogeneityLedger(tuple(bad), total, tuple(len(b) for b in p.blocks))


def _check_clique_system(g: Graph, cliques: Partition) -> None:
    for i, b in enumerate(cliques.blocks):
        if not is_clique(g, b):
            raise PreconditionError(f"block {i} is not a clique", ("block", i))
    for i, j in itertools.combinations(range(len(cliques.blocks)), 2):
        w = find_induced_m2(BipartitePair(g, cliques.blocks[i], cliques.blocks[j]))
        if w is not None:
            raise PreconditionError(f"blocks {i} and {j} contain an induced M2", ("pair", i, j, w))


def chain_r(delta: Fraction) -> int:
    """Number of chain intervals per pair: ``ceil(1 / delta)``."""
    return math.ceil(1 / Fraction(delta))


def block_bound(k: int, delta: Fraction) -> Fraction:
    """Upper bound ``k (2/delta)^k`` on the refinement's block count."""
    return k * (2 / Fraction(delta)) ** k


def _common_refinement(g: Graph, cliques: Partition, r: int) -> Partition:
    k = len(cliques.blocks)
    # signature[v][j] = index of v's block in the partition of its clique induced by pair with j
    signature: dict[int, list[int]] = {v: [] for v in cliques.ground}
    for i, j in itertools.combinations(range(k), 2):
        pair = BipartitePair(g, cliques.blocks[i], cliques.blocks[j])
        _, xs, ys = _pair_blocks_sparse(pair, r)
        for idx, members in xs:
            for v in members:
                signature[v].append(idx)
        for idx, members in ys:
            for v in members:
                signature[v].append(idx)
    blocks = []
    for i, b in enumerate(cliques.blocks):
        groups: dict[tuple[int, ...], list[int]] = {}
        for v in b:
            groups.setdefault(tuple(signature[v]), []).append(v)
        for key in sorted(groups):
            blocks.append(tuple(groups[key]))
    return Partition(cliques.ground, tuple(blocks))


def delta_homog_refinement(
    g: Graph, cliques: Partition, delta, *, check: bool = True
) -> tuple[Partition, HomogeneityLedger]:
    """Refine a clique system into a ``delta``-homogeneous partition.

    Per clique pair, the chain order is cut into ``r = ceil(1/delta)``
    intervals on one side and ``r + 1`` prefix-difference parts on the other;
    each clique is then split by the common refinement of the cuts it
    received. Only diagonal interval pairs can be non-homogeneous.

    Deficiency is measured against ``n = |ground|``. When interval rounding
    on tiny blocks pushes the ledger above ``delta * n**2``, ``r`` is raised
    until it fits or the block bound would be exceeded.
    """
    return _refine(g, cliques, Fraction(delta), check=check)[:2]


def _refine(g: Graph, cliques: Partition, delta: Fraction, *, check: bool = True):
    if not 0 < delta < 1:
        raise ValueError("delta must lie in (0, 1)")
    if check:
        _check_clique_system(g, cliques)
    n = len(cliques.ground)
    k = len(cliques.blocks)
    budget = delta * n * n
    bound = block_bound(k, delta)
    r = chain_r(delta)
    part = _common_refinement(g, cliques, r)
    ledger = homogeneity_deficiency(g, part)
    while ledger.deficiency > budget:
        bigger = _common_refinement(g, cliques, r + 1)
        if len(bigger) > bound:
            break
        r += 1
        part, ledger = bigger, homogeneity_deficiency(g, bigger)
    return part, ledger, r


@dataclass(frozen=True)
class StrongPartition:
    host: Graph = field(repr=False)
    z: tuple[int, ...]
    q_blocks: Partition
    w_subsets: tuple[tuple[int, ...], ...]
    delta: Fraction
    attempts: int
    coarse_size: int  # |P|
    fine_size: int  # size of the common refinement of P and V
    fine_delta: Fraction
    n_cliques: int
    ground_size: int
    coarse_r: int = 0
    fine_r: int = 0
    transcript: tuple = field(default=(), repr=False)

    @property
    def w_size_floor(self) -> float:
        """``(delta/2k)^(10k^2) n``: reported only, it is below 1 at desk scale."""
        k = self.n_cliques
        if k == 0:
            return 0.0
        return math.exp(10 * k * k * math.log(float(self.delta) / (2 * k))) * self.ground_size


def strong_homog_partition(
    g: Graph,
    cliques: Partition,
    delta,
    rng=None,
    max_retries: int = DEFAULT_MAX_RETRIES,
    *,
    check: bool = True,
) -> StrongPartition:
    """Large homogeneous-ish blocks ``Q_i`` with pairwise homogeneous ``W_i``.

    ``P`` is the ``delta`` refinement; blocks of ``P`` with at least
    ``delta n / |P|`` vertices become the ``Q_i`` and the rest is ``Z``. A
    second refinement with ``delta' = delta^2 / (8 |P|^4)`` is intersected
    with ``P``; each ``W_i`` is the fine block containing a uniform random
    vertex of ``Q_i``, resampled until every ``(W_i, W_j)`` is homogeneous.
    """
    delta = Fraction(delta)
    rng = as_rng(rng)
    n = len(cliques.ground)
    coarse, _, r1 = _refine(g, cliques, delta, check=check)
    psize = len(coarse)
    threshold = delta * n / psize
    q_list = [b for b in coarse.blocks if len(b) >= threshold]
    z = vertex_set(v for b in coarse.blocks if len(b) < threshold for v in b)
    fine_delta = delta * delta / (8 * psize ** 4)
    fine, _, r2 = _refine(g, cliques, fine_delta, check=False)
    fine_owner = fine.block_of()
    # common refinement of coarse and fine, restricted to each Q block
    candidates = []
    for q in q_list:
        groups: dict[int, list[int]] = {}
        for v in q:
            groups.setdefault(fine_owner[v], []).append(v)
        candidates.append({v: tuple(groups[fine_owner[v]]) for v in q})
    common_size = sum(len({fine_owner[v] for v in b}) for b in coarse.blocks)
    if common_size > psize * len(fine):
        raise AssertionError("common refinement larger than |P| * |V|")
    transcript = []
    for attempt in range(1, max_retries + 1):
        picks = [q[int(rng.integers(len(q)))] for q in q_list]
        ws = [cand[w] for cand, w in zip(candidates, picks)]
        bad = next(
            ((i, j) for i, j in itertools.combinations(range(len(ws)), 2)
             if homogeneity_type(g, ws[i], ws[j]) is None),
            None,
        )
        transcript.append({"attempt": attempt, "picks": picks, "failed_pair": bad})
        if bad is None:
            return StrongPartition(
                host=g,
                z=z,
                q_blocks=Partition(tuple(v for q in q_list for v in q), tuple(q_list)),
                w_subsets=tuple(ws),
                delta=delta,
                attempts=attempt,
                coarse_size=psize,
                fine_size=common_size,
                fine_delta=fine_delta,
                coarse_r=r1,
                fine_r=r2,
                transcript=tuple(transcript),
                n_cliques=len(cliques.blocks),
                ground_size=n,
            )
    raise StageFailure("strong-partition", f"no homogeneous W choice in {max_retries} attempts", transcript)
