"""Chordality: cycle-length accounting and the chordal removal pipeline."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Optional

from .decomposition import ConstantsConfig, StructureReport, find_dense_subset
from .generators import as_rng
from .graph import Graph
from .indset import CHORDAL
from .kernels import count_induced_c4, find_induced_cycle_geq4, is_chordal
from .m2free import EXACT_ORDER_CAP
from .pipeline import (
    REPLICATION_SAMPLES,
    PipelineResult,
    decompose_and_homogenize,
    exact_cycle_count,
    indset_branch,
    log2_gamma_chordal,
    replicate_cycle,
    resolve_params,
)


@dataclass(frozen=True)
class CycleBoundLedger:
    """An induced cycle meets each clique in at most two vertices, so ``l <= 2k``."""

    k: int
    l_max: int
    alpha: Fraction

    @property
    def within_alpha_bound(self) -> bool:
        return self.l_max <= 20 / self.alpha ** 3


def cycle_length_bound(sr: StructureReport, g2: Optional[Graph] = None) -> CycleBoundLedger:
    """Ledger for ``sr``; with ``g2`` any induced cycle of ``g2[X \\ Z]`` is checked against it."""
    ledger = CycleBoundLedger(sr.k, 2 * sr.k, sr.alpha)
    if not ledger.within_alpha_bound:
        raise AssertionError("2k exceeds 20 / alpha^3")
    if g2 is not None:
        zs = set(sr.z)
        sub, _ = g2.induced_subgraph([v for v in sr.x if v not in zs])
        cyc = find_induced_cycle_geq4(sub)
        if cyc is not None and len(cyc) > ledger.l_max:
            raise AssertionError(f"induced cycle of length {len(cyc)} exceeds 2k = {ledger.l_max}")
    return ledger


def chordal_pipeline(
    g: Graph,
    eps,
    constants: ConstantsConfig = ConstantsConfig(),
    rng=None,
    *,
    alpha=None,
    gamma=None,
    exact_cap: int = EXACT_ORDER_CAP,
    finder: Callable = find_dense_subset,
    samples: int = REPLICATION_SAMPLES,
) -> PipelineResult:
    """Certify many induced cycles of one length, or make the graph chordal.

    Outcomes mirror ``c4_pipeline``: ``"trivial"``, ``"c4-rich"``,
    ``"cycle-replication"`` (an induced ``C_l``, ``l <= 2k``, copied across
    ``W`` blocks and sample-checked in ``G'``) or ``"indset"``.
    """
    p = resolve_params(g, eps, alpha, gamma, log2_gamma_chordal)
    rng = as_rng(rng)
    result = PipelineResult("pending", {**p.as_dict(), "c": constants.c, "d": constants.d, "exact_cap": exact_cap})
    result.counts.update({"n": g.n, "m": g.m, "induced_c4": count_induced_c4(g)})
    if is_chordal(g):
        result.outcome = "trivial"
        result.certificates["edit_set"] = []
        return result
    got = decompose_and_homogenize(g, p, rng, result, constants=constants, exact_cap=exact_cap, finder=finder)
    if got is None:
        return result
    sr, g2 = got
    ledger = cycle_length_bound(sr, g2)
    result.certificates["cycle_bound"] = {"k": ledger.k, "l_max": ledger.l_max}
    zs = set(sr.z)
    sub, labels = g2.induced_subgraph([v for v in sr.x if v not in zs])
    cyc = find_induced_cycle_geq4(sub)
    if cyc is not None:
        cyc = tuple(labels[i] for i in cyc)
        result.check("cycle_within_2k", len(cyc) <= ledger.l_max)
        rep = replicate_cycle(sr, g2, cyc, rng, result, samples)
        exact = exact_cycle_count(g, len(cyc))
        result.counts[f"induced_c{len(cyc)}"] = exact
        if exact is not None:
            result.check("replication_bound_below_exact", rep["copies_in_g_lower"] <= exact)
        result.outcome = "cycle-replication"
        result.certificates["replication"] = rep
        return result
    cert = indset_branch(g, sr, g2, CHORDAL, rng, result, p.eps)
    result.check("indset_bound_below_exact", cert["copies_in_g_lower"] <= result.counts["induced_c4"])
    result.outcome = "indset"
    result.certificates["indset"] = cert
    return result
