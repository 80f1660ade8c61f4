"""Dense-set peeling and the conditional-regularity structure.

The structure theorem splits a graph into a few near-cliques ``X_1..X_k``
and a sparse remainder ``Y``, or certifies many induced 4-cycles. The
existence argument behind the dense sets goes through a sampling clique
tester and is not constructive; here a concrete search stands in for it
(``find_dense_subset``) and any failure of that search is reported rather
than papered over.
"""

from __future__ import annotations

import itertools
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional

from .errors import DegenerateSetError, PreconditionError, StageFailure
from .generators import as_rng
from .graph import EditSet, Graph, bits, edge_count_within, homogeneity_type, mask_of, norm_pair, vertex_set
from .kernels import count_induced_c4, find_induced_c4, is_clique, is_independent, max_clique
from .m2free import EXACT_ORDER_CAP, BipartitePair, find_induced_m2, min_edits_to_m2free
from .partition import DEFAULT_MAX_RETRIES, Partition, StrongPartition, homogeneity_deficiency, strong_homog_partition

EXHAUSTIVE_DENSE_LIMIT = 16


@dataclass(frozen=True)
class ConstantsConfig:
    """Stand-ins for the unspecified absolute constants.

    ``d`` is the 2-matching removal exponent (default 1); ``c`` the
    exponent in the many-4-cycles threshold, ``max(84, 20 d)`` by default.
    """

    c: Fraction = Fraction(84)
    d: Fraction = Fraction(1)

    def __post_init__(self):
        object.__setattr__(self, "c", Fraction(self.c))
        object.__setattr__(self, "d", Fraction(self.d))
        if self.c <= 0 or self.d <= 0:
            raise ValueError("constants must be positive")


def _frac_pow(base: Fraction, exp: Fraction) -> Fraction:
    if exp.denominator == 1:
        return Fraction(base) ** int(exp)
    return Fraction(float(base) ** float(exp))


@dataclass(frozen=True)
class SamplerConfig:
    q: int = 0
    rho: Fraction = Fraction(1, 2)
    eps: Fraction = Fraction(1, 10)
    alpha: Fraction = Fraction(1, 5)
    r: int = 0
    trials: int = 1

    @staticmethod
    def default_q(eps) -> int:
        """``ceil(100 / eps^5)``; only the order of the sample size is known."""
        return math.ceil(100 / Fraction(eps) ** 5)

    @staticmethod
    def default_r(alpha) -> int:
        return math.ceil(100 / Fraction(alpha) ** 2)


@dataclass(frozen=True)
class SampleVerdict:
    verdict: str
    sample: tuple[int, ...]
    value: int  # clique size or spanned edge count
    threshold: Fraction
    witness: tuple[int, ...] = ()


def _sample(n: int, size: int, rng) -> tuple[int, ...]:
    return tuple(sorted(int(v) for v in as_rng(rng).choice(n, size=size, replace=False)))


def sample_clique_test(g: Graph, cfg: SamplerConfig, rng) -> SampleVerdict:
    """Sample ``q`` vertices; "looks-far" iff the sample's clique number is
    below ``(rho - eps/2) q``."""
    rho, eps = Fraction(cfg.rho), Fraction(cfg.eps)
    if not 0 < eps < rho * rho / 2:
        raise ValueError("clique test needs 0 < eps < rho^2 / 2")
    if not 1 <= cfg.q <= g.n:
        raise ValueError(f"sample size q={cfg.q} outside [1, n={g.n}]")
    sample = _sample(g.n, cfg.q, rng)
    sub, labels = g.induced_subgraph(sample)
    omega, wit = max_clique(sub)
    threshold = (rho - eps / 2) * cfg.q
    verdict = "looks-far" if omega < threshold else "looks-close"
    return SampleVerdict(verdict, sample, omega, threshold, tuple(labels[i] for i in wit))


def sample_density_test(g: Graph, cfg: SamplerConfig, rng) -> SampleVerdict:
    """Sample ``r`` vertices; "pass" iff they span at least ``(alpha/2) r^2`` edges.

    ``r`` must be at least ``100 / alpha^2`` unless it equals ``n`` (the
    recommended size capped by the graph).
    """
    alpha = Fraction(cfg.alpha)
    if not 1 <= cfg.r <= g.n:
        raise ValueError(f"sample size r={cfg.r} outside [1, n={g.n}]")
    if cfg.r < 100 / alpha ** 2 and cfg.r != g.n:
        raise ValueError(f"r={cfg.r} below 100/alpha^2 and not capped at n")
    sample = _sample(g.n, cfg.r, rng)
    e = edge_count_within(g, sample)
    threshold = alpha / 2 * cfg.r * cfg.r
    return SampleVerdict("pass" if e >= threshold else "fail", sample, e, threshold)


def _meets(e: int, size: int, min_size: int, min_density: Fraction) -> bool:
    return size >= min_size and size >= 2 and 2 * e >= min_density * size * (size - 1)


def find_dense_subset(
    g: Graph,
    min_size: int,
    min_density,
    within=None,
    *,
    exhaustive_limit: int = EXHAUSTIVE_DENSE_LIMIT,
) -> Optional[tuple[int, ...]]:
    """A vertex set of at least ``min_size`` vertices and density at least
    ``min_density``, or ``None`` when the search found nothing.

    Greedy min-degree peeling keeps the largest qualifying prefix, which is
    then grown by adding outside vertices while the density holds. If
    peeling finds nothing and the search space has at most
    ``exhaustive_limit`` vertices, all subsets are tried largest first.
    ``None`` is not a proof that no such set exists.
    """
    if min_size < 2:
        raise DegenerateSetError("min_size must be at least 2")
    min_density = Fraction(min_density)
    pool = mask_of(range(g.n)) if within is None else mask_of(within)
    adj = g.adj

    alive = pool
    deg = {v: (adj[v] & alive).bit_count() for v in bits(alive)}
    edges = sum(deg.values()) // 2
    found = None
    while alive and alive.bit_count() >= min_size:
        if _meets(edges, alive.bit_count(), min_size, min_density):
            found = alive
            break
        v = min(deg, key=lambda u: (deg[u], u))
        alive &= ~(1 << v)
        edges -= deg.pop(v)
        for u in bits(adj[v] & alive):
            deg[u] -= 1

    if found is None and pool.bit_count() <= exhaustive_limit:
        members = list(bits(pool))
        for size in range(len(members), min_size - 1, -1):
            for combo in itertools.combinations(members, size):
                if _meets(edge_count_within(g, combo), size, min_size, min_density):
                    found = mask_of(combo)
                    break
            if found is not None:
                break
    if found is None:
        return None

    size = found.bit_count()
    edges = edge_count_within(g, bits(found))
    grew = True
    while grew:
        grew = False
        outside = sorted(bits(pool & ~found), key=lambda v: (-(adj[v] & found).bit_count(), v))
        for v in outside:
            gain = (adj[v] & found).bit_count()
            if _meets(edges + gain, size + 1, min_size, min_density):
                found |= 1 << v
                size += 1
                edges += gain
                grew = True
                break
    return tuple(bits(found))


@dataclass(frozen=True)
class GHSResult:
    holds: bool
    alpha: Fraction
    omega: int
    witness: tuple[int, ...] = ()


def ghs_check(g: Graph) -> GHSResult:
    """Check ``omega(G) >= 0.4 alpha^2 n`` with ``alpha = e(G)/n^2`` on an induced-C4-free graph."""
    c4 = find_induced_c4(g)
    if c4 is not None:
        raise PreconditionError("graph contains an induced C4", c4)
    if g.n == 0:
        return GHSResult(True, Fraction(0), 0)
    alpha = Fraction(g.m, g.n * g.n)
    omega, wit = max_clique(g)
    return GHSResult(omega >= Fraction(2, 5) * alpha * alpha * g.n, alpha, omega, wit)


@dataclass(frozen=True)
class C4Rich:
    """Certified many-4-cycles outcome: exact count against the threshold."""

    count: int
    threshold: Fraction
    stage: str
    detail: dict = field(default_factory=dict)


def c4_rich_threshold(n: int, alpha, gamma, constants: ConstantsConfig) -> Fraction:
    """``alpha^c gamma^c n^4`` with the configured stand-in for ``c``."""
    return _frac_pow(Fraction(alpha) * Fraction(gamma), constants.c) * n ** 4


@dataclass(frozen=True)
class PeelResult:
    x_blocks: tuple[tuple[int, ...], ...]
    y: tuple[int, ...]
    min_density: Fraction
    trace: tuple = ()

    @property
    def k(self) -> int:
        return len(self.x_blocks)


def peel_decomposition(
    g: Graph,
    alpha,
    gamma,
    finder: Callable = find_dense_subset,
    *,
    constants: ConstantsConfig = ConstantsConfig(),
    min_density=None,
) -> PeelResult | C4Rich:
    """Repeatedly strip a near-clique until the rest has fewer than ``alpha n^2`` edges.

    Each extracted set has at least ``max(2, ceil(0.1 alpha^2 |V_i|))``
    vertices (so at least ``0.1 alpha^3 n``) and density at least
    ``1 - gamma^d / 4`` unless ``min_density`` overrides it. When the finder
    comes back empty on a residual that still has ``alpha n^2`` edges, the
    exact induced-C4 count decides between a certified rich verdict and a
    ``StageFailure`` carrying the residual set.
    """
    alpha, gamma = Fraction(alpha), Fraction(gamma)
    if not (0 < alpha < 1 and 0 < gamma < 1):
        raise ValueError("alpha and gamma must lie in (0, 1)")
    n = g.n
    if min_density is None:
        min_density = 1 - _frac_pow(gamma, constants.d) / 4
    min_density = Fraction(min_density)
    budget = alpha * n * n
    alive = list(range(n))
    blocks = []
    trace = []
    while alive and edge_count_within(g, alive) >= budget:
        size = max(2, math.ceil(Fraction(1, 10) * alpha ** 2 * len(alive)))
        x = finder(g, size, min_density, alive)
        if x is None:
            sub, _ = g.induced_subgraph(alive)
            residual_c4 = count_induced_c4(sub)
            threshold = c4_rich_threshold(n, alpha, gamma, constants)
            if residual_c4 > 0 and residual_c4 >= threshold:
                return C4Rich(count_induced_c4(g), threshold, "peel",
                              {"residual": alive, "residual_c4": residual_c4})
            raise StageFailure("peel", "dense-set search failed on a dense residual",
                               {"residual": alive, "residual_c4": residual_c4})
        x = vertex_set(x)
        d = Fraction(edge_count_within(g, x), len(x) * (len(x) - 1) // 2)
        if len(x) < Fraction(1, 10) * alpha ** 3 * n or d < 1 - gamma or d < min_density:
            raise AssertionError(f"extracted set violates its size/density bounds: {x}")
        blocks.append(x)
        trace.append({"size": len(x), "density": d, "residual": len(alive)})
        xs = set(x)
        alive = [v for v in alive if v not in xs]
    return PeelResult(tuple(blocks), tuple(alive), min_density, tuple(trace))


@dataclass(frozen=True)
class StructureReport:
    g: Graph = field(repr=False)
    g_prime: Graph = field(repr=False)
    g_intermediate: Graph = field(repr=False)  # before isolating Z
    x_blocks: Partition
    y: tuple[int, ...]
    z: tuple[int, ...]
    strong: Optional[StrongPartition]
    edits_total: EditSet = field(repr=False)
    edits_inside_x: EditSet = field(repr=False)
    alpha: Fraction
    gamma: Fraction
    pair_modes: tuple = ()
    checks: tuple[tuple[str, bool], ...] = ()

    @property
    def k(self) -> int:
        return len(self.x_blocks.blocks)

    @property
    def x(self) -> tuple[int, ...]:
        return self.x_blocks.ground

    @property
    def q_blocks(self) -> tuple[tuple[int, ...], ...]:
        return self.strong.q_blocks.blocks if self.strong else ()

    @property
    def w_subsets(self) -> tuple[tuple[int, ...], ...]:
        return self.strong.w_subsets if self.strong else ()


def _threads() -> int:
    try:
        return max(1, int(os.environ.get("C4LAB_THREADS", "1")))
    except ValueError:
        return 1


def _pair_edit(g: Graph, a, b, exact_cap: int):
    # exact mode fits the smaller side's order, the cap applies to that side
    xs, ys = (a, b) if len(a) <= len(b) else (b, a)
    return min_edits_to_m2free(BipartitePair(g, xs, ys), exact_cap=exact_cap, heuristic=True)


def structure_clauses(sr: StructureReport) -> list[tuple[str, bool]]:
    """Recheck the five structure clauses on ``sr`` from scratch."""
    g, gp = sr.g, sr.g_prime
    n = g.n
    alpha, gamma = sr.alpha, sr.gamma
    zs = set(sr.z)
    x_minus_z = [v for v in sr.x if v not in zs]
    checks = []
    checks.append(("x_blocks_cliques", all(is_clique(gp, [v for v in b if v not in zs]) for b in sr.x_blocks.blocks)))
    checks.append(("y_independent", is_independent(gp, sr.y)))
    checks.append(("z_small", len(sr.z) < alpha * n))
    checks.append(("z_isolated", all(gp.adj[z] == 0 for z in sr.z)))
    q = sr.q_blocks
    if q:
        led = homogeneity_deficiency(gp, Partition.of(q))
        checks.append(("q_refines_x_minus_z", sorted(v for b in q for v in b) == x_minus_z
                       and all(len({sr.x_blocks.block_of()[v] for v in b}) == 1 for b in q)))
        checks.append(("q_deficiency", led.deficiency <= alpha * n * n))
        ws = sr.w_subsets
        checks.append(("w_inside_q", all(w and set(w) <= set(qb) for w, qb in zip(ws, q))))
        checks.append(("w_homogeneous", all(
            homogeneity_type(gp, ws[i], ws[j]) is not None
            for i, j in itertools.combinations(range(len(ws)), 2))))
    else:
        checks.append(("q_refines_x_minus_z", not x_minus_z))
    diff_total = EditSet.diff(g, gp)
    checks.append(("edits_total", len(diff_total) < (2 * alpha + gamma) * n * n))
    xm = mask_of(x_minus_z)
    inside = [t for t in diff_total if xm >> t[0] & 1 and xm >> t[1] & 1]
    checks.append(("edits_inside_x", len(inside) < gamma * n * n))
    checks.append(("block_count", sr.k <= 10 / alpha ** 3))
    return checks


def conditional_regularity(
    g: Graph,
    alpha,
    gamma,
    rng=None,
    *,
    constants: ConstantsConfig = ConstantsConfig(),
    finder: Callable = find_dense_subset,
    exact_cap: int = EXACT_ORDER_CAP,
    max_retries: int = DEFAULT_MAX_RETRIES,
    min_density=None,
) -> StructureReport | C4Rich:
    """Edit ``g`` into cliques ``X_i \\ Z``, independent ``Y``, isolated ``Z``
    with large blocks ``Q_i`` and pairwise homogeneous ``W_i ⊆ Q_i``.

    Raises ``StageFailure`` when a stage cannot certify its result; a report
    is only returned once every clause has been rechecked.
    """
    alpha, gamma = Fraction(alpha), Fraction(gamma)
    n = g.n
    peel = peel_decomposition(g, alpha, gamma, finder, constants=constants, min_density=min_density)
    if isinstance(peel, C4Rich):
        return peel
    blocks = list(peel.x_blocks)

    toggles = []
    ym = mask_of(peel.y)
    for u in peel.y:
        for v in bits(g.adj[u] & ym & ~((1 << (u + 1)) - 1)):
            toggles.append((u, v, "delete"))
    for b in blocks:
        for u, v in itertools.combinations(b, 2):
            if not g.adjacent(u, v):
                toggles.append((u, v, "add"))

    pairs = list(itertools.combinations(range(len(blocks)), 2))
    with ThreadPoolExecutor(max_workers=_threads()) as pool:
        results = list(pool.map(lambda ij: _pair_edit(g, blocks[ij[0]], blocks[ij[1]], exact_cap), pairs))
    pair_modes = []
    for (i, j), res in zip(pairs, results):
        size = len(blocks[i]) * len(blocks[j])
        pair_modes.append({"pair": [i, j], "mode": res.mode, "edits": res.count})
        if res.count >= gamma * size:
            detail = {"pair": [i, j], "edits": res.count, "mode": res.mode}
            if res.mode == "exact":
                total = count_induced_c4(g)
                threshold = c4_rich_threshold(n, alpha, gamma, constants)
                if total > 0 and total >= threshold:
                    return C4Rich(total, threshold, "m2-far", detail)
            raise StageFailure("m2-edit", f"pair {i},{j} needs {res.count} edits, budget below {float(gamma * size):g}", detail)
        toggles.extend(res.edits.toggles)

    edits_mid = EditSet.from_toggles(toggles)
    g_mid = g.toggled(edits_mid.pairs())
    for i, j in pairs:
        w = find_induced_m2(BipartitePair(g_mid, blocks[i], blocks[j]))
        if w is not None:
            raise AssertionError(f"pair {i},{j} still has an induced M2 after editing")

    x_part = Partition.of(blocks)
    strong = None
    z: tuple[int, ...] = ()
    if blocks:
        strong = strong_homog_partition(g_mid, x_part, alpha, rng, max_retries)
        z = strong.z
    rows = list(g_mid.adj)
    zm = mask_of(z)
    for v in range(n):
        rows[v] &= ~zm
    for v in z:
        rows[v] = 0
    g_prime = Graph._trusted(n, tuple(rows))
    edits_total = EditSet.diff(g, g_prime)
    xm = mask_of(v for v in x_part.ground if not zm >> v & 1)
    edits_inside = EditSet(tuple(t for t in edits_total if xm >> t[0] & 1 and xm >> t[1] & 1))

    sr = StructureReport(
        g=g, g_prime=g_prime, g_intermediate=g_mid, x_blocks=x_part, y=peel.y, z=z,
        strong=strong, edits_total=edits_total, edits_inside_x=edits_inside,
        alpha=alpha, gamma=gamma, pair_modes=tuple(pair_modes),
    )
    checks = structure_clauses(sr)
    failed = [name for name, ok in checks if not ok]
    if failed:
        raise StageFailure("clauses", f"structure clauses failed: {failed}", {"checks": checks})
    return StructureReport(**{**sr.__dict__, "checks": tuple(checks)})


def homogenize_on_w(sr: StructureReport) -> Graph:
    """Make each ``(Q_i, Q_j)`` complete or empty according to ``(W_i, W_j)`` in ``G'``."""
    gp = sr.g_prime
    rows = list(gp.adj)
    q, ws = sr.q_blocks, sr.w_subsets
    changed = 0
    deficiency = 0
    for i, j in itertools.combinations(range(len(q)), 2):
        kind = homogeneity_type(gp, ws[i], ws[j])
        if kind is None:
            raise PreconditionError(f"W pair {i},{j} is not homogeneous", (i, j))
        if homogeneity_type(gp, q[i], q[j]) is None:
            deficiency += len(q[i]) * len(q[j])
        qj = mask_of(q[j])
        for u in q[i]:
            want = qj if kind == "complete" else 0
            delta = (rows[u] & qj) ^ want
            if delta:
                changed += delta.bit_count()
                rows[u] ^= delta
                for v in bits(delta):
                    rows[v] ^= 1 << u
    if changed > deficiency:
        raise AssertionError("homogenisation changed more pairs than the Q deficiency")
    return Graph._trusted(gp.n, tuple(rows))
