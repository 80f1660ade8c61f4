"""Command-line front end: one subcommand per run, one JSON report per run.

Exit status: 0 when the outcome is certified, 2 on a structured stage
failure, 1 on bad input (unreadable file, malformed graph, bad flags,
violated preconditions of user-supplied sets).
"""

from __future__ import annotations

import argparse
import itertools
import json
import sys
import time
from fractions import Fraction
from typing import Callable, Optional

from . import __version__
from .chordal import chordal_pipeline
from .decomposition import C4Rich, ConstantsConfig, conditional_regularity
from .errors import BudgetExceeded, C4LabError, GraphFormatError, PreconditionError, StageFailure
from .farness import EXACT_N_CAP, farness_certificate, resolve_property
from .graph import EditSet, Graph, homogeneity_type
from .indset import c4_lower_bound_certificate, indset_edit
from .io import read_graph, write_text_atomic
from .kernels import count_induced_c4, find_induced_c4, is_clique, is_independent, is_induced_cycle
from .lowerbound import (
    blowup_cycle,
    blowup_edge_count,
    build_hard_family,
    find_complete_kpartite_subhypergraph,
    single_edit_destruction,
    transversal_cycle_hypergraph,
    verify_no_short_induced_cycles,
    write_hard_family,
)
from .m2free import (
    EXACT_ORDER_CAP,
    BipartitePair,
    M2Witness,
    NestedOrder,
    count_induced_m2,
    find_induced_m2,
    min_edits_to_m2free,
    nested_order,
)
from .partition import Partition, block_bound, delta_homog_refinement, homogeneity_deficiency, strong_homog_partition
from .pipeline import PipelineResult, _jsonable, c4_pipeline, structure_summary

SCHEMA = 1
RANDOMIZED = {"partition", "decompose", "pipeline-c4", "pipeline-chordal"}
NEEDS_INPUT = {"count-c4", "m2-check", "partition", "decompose", "edit-indset", "farness",
               "pipeline-c4", "pipeline-chordal", "report-audit"}


class InputError(C4LabError):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise InputError(message)


def _rational(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}") from None


def _vertex_list(text: str) -> list[int]:
    try:
        return [int(t) for t in text.replace(" ", "").split(",") if t]
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a comma-separated vertex list: {text!r}") from None


def _block_list(text: str) -> list[list[int]]:
    return [_vertex_list(b) for b in text.split(";") if b.strip()]


class Run:
    """Accumulates one report."""

    def __init__(self, command: str, config: dict):
        self.command = command
        self.config = config
        self.outcome = "pending"
        self.certificates: dict = {}
        self.counts: dict = {}
        self.checks: list[tuple[str, bool]] = []

    def check(self, name: str, passed: bool) -> None:
        self.checks.append((name, bool(passed)))

    def absorb(self, res: PipelineResult) -> None:
        self.outcome = res.outcome
        self.certificates.update(res.certificates)
        self.counts.update(res.counts)
        self.checks.extend(res.checks)

    def report(self, timing_ms: float, error: Optional[dict] = None) -> dict:
        return {
            "schema": SCHEMA,
            "config": _jsonable(self.config),
            "outcome": self.outcome,
            "certificates": _jsonable(self.certificates),
            "counts": _jsonable(self.counts),
            "invariant_checks": [{"name": n, "passed": p} for n, p in self.checks],
            "timing_ms": round(timing_ms, 3),
            "error": error,
        }


def _require(args, *names):
    for name in names:
        if getattr(args, name) is None:
            raise InputError(f"--{name.replace('_', '-')} is required for {args.command}")


def _constants(args) -> ConstantsConfig:
    kw = {}
    if args.const_c is not None:
        kw["c"] = args.const_c
    if args.const_d is not None:
        kw["d"] = args.const_d
    return ConstantsConfig(**kw)


def cmd_count_c4(g: Graph, args, run: Run) -> None:
    total = count_induced_c4(g)
    run.counts.update({"n": g.n, "m": g.m, "induced_c4": total})
    w = find_induced_c4(g)
    run.outcome = "counted"
    run.certificates["witness"] = list(w) if w else None
    run.check("witness_iff_positive", (w is not None) == (total > 0))
    if w:
        run.check("witness_induces_c4", is_induced_cycle(g, w))


def cmd_m2_check(g: Graph, args, run: Run) -> None:
    _require(args, "x", "y")
    p = BipartitePair(g, args.x, args.y)
    res = nested_order(p)
    run.counts["induced_m2"] = count_induced_m2(p)
    if isinstance(res, M2Witness):
        run.outcome = "m2-present"
        run.certificates["witness"] = res.as_list()
        run.check("witness_verified", res.verify(g))
    else:
        run.outcome = "m2-free"
        run.certificates["nested_order"] = list(res.order)
    small, large = (p.x, p.y) if len(p.x) <= len(p.y) else (p.y, p.x)
    cap = args.exact_cap if args.exact_cap is not None else EXACT_ORDER_CAP
    edit = min_edits_to_m2free(BipartitePair(g, small, large), exact_cap=cap, heuristic=True)
    after = g.toggled(edit.edits.pairs())
    run.certificates["m2_edits"] = {"count": edit.count, "mode": edit.mode, "edit_set": edit.edits.to_json()}
    run.check("edits_make_pair_m2_free", find_induced_m2(BipartitePair(after, p.x, p.y)) is None)
    run.check("zero_edits_iff_free", (edit.count == 0) == (run.outcome == "m2-free"))


def cmd_partition(g: Graph, args, run: Run) -> None:
    _require(args, "blocks")
    delta = args.delta if args.delta is not None else Fraction(1, 2)
    cliques = Partition.of(args.blocks)
    n = len(cliques.ground)
    part, ledger = delta_homog_refinement(g, cliques, delta)
    sp = strong_homog_partition(g, cliques, delta, args.seed)
    run.outcome = "strong-partition"
    run.certificates["refinement"] = {
        "blocks": part.to_json(),
        "non_homogeneous_pairs": [list(p) for p in ledger.non_homogeneous_pairs],
        "deficiency": ledger.deficiency,
    }
    run.certificates["strong"] = {
        "z": list(sp.z),
        "q_blocks": sp.q_blocks.to_json(),
        "w_subsets": [list(w) for w in sp.w_subsets],
        "attempts": sp.attempts,
        "w_size_floor": sp.w_size_floor,
    }
    run.counts.update({"ground": n, "k": len(cliques.blocks), "refinement_blocks": len(part.blocks)})
    run.check("block_count_bound", len(part.blocks) <= block_bound(len(cliques.blocks), delta))
    run.check("deficiency_within_delta_n2", ledger.deficiency <= delta * n * n)
    run.check("deficiency_recomputed", homogeneity_deficiency(g, part).deficiency == ledger.deficiency)
    run.check("z_small", len(sp.z) < delta * n)
    run.check("q_deficiency", homogeneity_deficiency(g, sp.q_blocks).deficiency <= delta * n * n)
    run.check("w_pairwise_homogeneous", all(
        homogeneity_type(g, a, b) is not None for a, b in itertools.combinations(sp.w_subsets, 2)))


def cmd_decompose(g: Graph, args, run: Run) -> None:
    alpha = args.alpha if args.alpha is not None else Fraction(1, 5)
    gamma = args.gamma if args.gamma is not None else Fraction(3, 10)
    cap = args.exact_cap if args.exact_cap is not None else EXACT_ORDER_CAP
    sr = conditional_regularity(g, alpha, gamma, args.seed, constants=_constants(args), exact_cap=cap)
    run.counts.update({"n": g.n, "m": g.m})
    if isinstance(sr, C4Rich):
        run.outcome = "c4-rich"
        run.counts["induced_c4"] = sr.count
        run.certificates["c4_rich"] = {"stage": sr.stage, "count": sr.count, "threshold": sr.threshold,
                                       "witness": list(find_induced_c4(g))}
        run.check("rich_count_exact", count_induced_c4(g) == sr.count)
        return
    run.outcome = "structure"
    run.certificates["structure"] = structure_summary(sr)
    for name, ok in sr.checks:
        run.check(f"structure:{name}", ok)


def cmd_edit_indset(g: Graph, args, run: Run) -> None:
    _require(args, "x", "y")
    fam = resolve_property(args.property)
    res = indset_edit(g, args.x, args.y, fam)
    cert = c4_lower_bound_certificate(g, args.x, args.y)
    exact = count_induced_c4(g)
    run.outcome = "edited"
    run.certificates["anti_matchings"] = {str(am.owner): [list(p) for p in am.pairs] for am in res.matchings}
    run.certificates["edit_set"] = res.edits.to_json()
    run.certificates["c4_certificate"] = {"certified": cert.certified_count, "jensen_bound": cert.analytic_bound}
    run.counts.update({"edits": len(res.edits), "induced_c4": exact})
    run.check("edit_size_identity", len(res.edits) == 2 * sum(len(am) for am in res.matchings))
    sub, _ = res.graph.induced_subgraph(sorted(set(args.x) | set(args.y)))
    run.check("edited_graph_property_free", fam.is_free(sub))
    run.check("certificate_below_exact", cert.certified_count <= exact)


def cmd_farness(g: Graph, args, run: Run) -> None:
    fam = resolve_property(args.property)
    cap = args.exact_cap if args.exact_cap is not None else EXACT_N_CAP
    cert = farness_certificate(g, fam, exact_cap=cap)
    run.outcome = "farness"
    run.counts.update({"n": g.n, "m": g.m, "lower": cert.lower, "upper": cert.upper, "exact": cert.exact})
    run.certificates["lower_witnesses"] = [list(w) for w in cert.lower_witnesses]
    run.certificates["edit_set"] = cert.upper_edits.to_json()
    run.certificates["upper_strategy"] = cert.strategy
    run.certificates["exact_edit_set"] = cert.exact_edits.to_json() if cert.exact_edits is not None else None
    run.check("sandwich", cert.lower <= cert.upper and (cert.exact is None or cert.lower <= cert.exact <= cert.upper))
    run.check("certificate_reverified", cert.verify(g))


def cmd_lowerbound(args, run: Run) -> None:
    _require(args, "k", "f")
    k, f = args.k, args.f
    b = blowup_cycle(k, f)
    g = b.graph
    run.outcome = "blowup"
    run.counts.update({"n": g.n, "m": g.m, "expected_m": blowup_edge_count(k, f), "epsilon_k": Fraction(1, 2 * k * k)})
    run.check("edge_formula", g.m == blowup_edge_count(k, f))
    if g.n <= 64:
        ok, cex = verify_no_short_induced_cycles(g, b.parts, k)
        run.certificates["short_cycle_counterexample"] = list(cex) if cex else None
        run.check("no_short_induced_cycles", ok if k >= 5 else True)
    if f ** k <= 10 ** 5:
        h = transversal_cycle_hypergraph(g, b.parts)
        run.counts["transversal_cycles"] = len(h)
        run.check("transversal_count", len(h) == f ** k)
        if f ** k * g.n * g.n <= 5 * 10 ** 6:
            worst, pair = single_edit_destruction(k, f)
            run.counts["max_single_edit_destruction"] = worst
            run.certificates["worst_edit_pair"] = list(pair)
            run.check("single_edit_destruction_bound", worst <= f ** (k - 2))
        if f <= 6:
            sub = find_complete_kpartite_subhypergraph(h, min(f, 2))
            run.certificates["complete_kpartite"] = [list(u) for u in sub] if sub else None
            run.check("complete_kpartite_found", sub is not None)
    if args.family_dir:
        fam = build_hard_family(lambda eps: f, range(5, max(5, k) + 1))
        write_hard_family(args.family_dir, fam)
        run.certificates["family"] = fam.manifest()


def _pipeline(kind: str):
    def cmd(g: Graph, args, run: Run) -> None:
        _require(args, "epsilon")
        cap = args.exact_cap if args.exact_cap is not None else EXACT_ORDER_CAP
        kw = dict(alpha=args.alpha, gamma=args.gamma, exact_cap=cap)
        if kind == "c4":
            res = c4_pipeline(g, args.epsilon, constants=_constants(args), rng=args.seed, **kw)
        else:
            res = chordal_pipeline(g, args.epsilon, _constants(args), args.seed, **kw)
        run.absorb(res)
    return cmd


def _audit_edit_set(g: Graph, data, fam, run: Run, name: str, subset=None) -> None:
    try:
        e = EditSet(tuple((int(u), int(v), str(d)) for u, v, d in data))
        e.check(g)
    except (ValueError, C4LabError):
        run.check(f"{name}:consistent", False)
        return
    h = g.toggled(e.pairs())
    if subset is not None:
        h, _ = h.induced_subgraph(subset)
    run.check(f"{name}:property_reached", fam.is_free(h))


def cmd_report_audit(g: Graph, args, run: Run) -> None:
    """Re-verify every witness and edit set embedded in a saved report."""
    _require(args, "report")
    try:
        with open(args.report, encoding="utf-8") as fh:
            rep = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"cannot read report: {exc}") from None
    cfg = rep.get("config", {})
    cmd = cfg.get("command")
    certs = rep.get("certificates") or {}
    counts = rep.get("counts") or {}
    run.outcome = "audited"
    run.counts["audited_command"] = cmd
    run.check("schema_version", rep.get("schema") == SCHEMA)
    if "induced_c4" in counts and counts["induced_c4"] is not None:
        run.check("induced_c4_count", count_induced_c4(g) == counts["induced_c4"])
    w = certs.get("witness")
    if cmd == "count-c4" and w:
        run.check("witness_induces_c4", is_induced_cycle(g, w))
    if cmd == "m2-check":
        p = BipartitePair(g, cfg["x"], cfg["y"])
        if w:
            run.check("m2_witness", M2Witness(*w).verify(g))
        if "nested_order" in certs:
            try:
                NestedOrder(p, tuple(certs["nested_order"]))
                run.check("nested_order", True)
            except ValueError:
                run.check("nested_order", False)
        e = EditSet(tuple((u, v, d) for u, v, d in certs["m2_edits"]["edit_set"]))
        after = g.toggled(e.pairs())
        run.check("m2_edits", find_induced_m2(BipartitePair(after, p.x, p.y)) is None)
    if "c4_rich" in certs:
        wit = certs["c4_rich"]["witness"]
        run.check("c4_rich_witness", is_induced_cycle(g, wit))
        run.check("c4_rich_count", count_induced_c4(g) == certs["c4_rich"]["count"])
    if cmd == "partition":
        s = certs["strong"]
        ws = s["w_subsets"]
        run.check("w_pairwise_homogeneous", all(homogeneity_type(g, a, b) is not None for a, b in itertools.combinations(ws, 2)))
        run.check("w_inside_q", all(set(a) <= set(q) for a, q in zip(ws, s["q_blocks"])))
        part = Partition.of(certs["refinement"]["blocks"])
        run.check("deficiency", homogeneity_deficiency(g, part).deficiency == certs["refinement"]["deficiency"])
    prop = "chordal" if cmd == "pipeline-chordal" else cfg.get("property") or "c4"
    fam = resolve_property(prop)
    if cmd == "farness":
        _audit_edit_set(g, certs["edit_set"], fam, run, "upper")
        if certs.get("exact_edit_set") is not None:
            _audit_edit_set(g, certs["exact_edit_set"], fam, run, "exact")
            run.check("exact_size", len(certs["exact_edit_set"]) == counts["exact"])
        used, ok = set(), True
        for wit in certs["lower_witnesses"]:
            pairs = {(min(a, b), max(a, b)) for a, b in itertools.combinations(wit, 2)}
            ok = ok and used.isdisjoint(pairs) and is_induced_cycle(g, wit)
            used |= pairs
        run.check("packing_witnesses", ok and len(certs["lower_witnesses"]) == counts["lower"])
    if cmd == "edit-indset":
        _audit_edit_set(g, certs["edit_set"], fam, run, "indset", sorted(set(cfg["x"]) | set(cfg["y"])))
    if cmd in ("pipeline-c4", "pipeline-chordal"):
        if "indset" in certs:
            _audit_edit_set(g, certs["indset"]["edit_set"], fam, run, "indset")
        if rep.get("outcome") == "trivial":
            run.check("trivial_input", fam.is_free(g))
    struct = certs.get("structure")
    gp = None
    if struct and "edit_set_g_prime" in struct:
        e = EditSet(tuple((u, v, d) for u, v, d in struct["edit_set_g_prime"]))
        gp = g.toggled(e.pairs())
        zs = set(struct["z"])
        run.check("g_prime:z_isolated", all(gp.adj[z] == 0 for z in zs))
        run.check("g_prime:x_blocks_cliques", all(is_clique(gp, [v for v in b if v not in zs]) for b in struct["x_blocks"]))
        run.check("g_prime:y_independent", is_independent(gp, struct["y"]))
        ws = struct["w_subsets"]
        run.check("g_prime:w_pairwise_homogeneous",
                  all(homogeneity_type(gp, a, b) is not None for a, b in itertools.combinations(ws, 2)))
    if "replication" in certs:
        rep_c = certs["replication"]
        run.check("replication:cycle_length", len(rep_c["cycle"]) == rep_c["length"])
        if gp is not None:
            run.check("replication:sample_tuples_induce_cycles",
                      all(is_induced_cycle(gp, t) for t in rep_c["sample_tuples"]))
    run.check("report_checks_all_passed", all(c["passed"] for c in rep.get("invariant_checks", [])))


COMMANDS: dict[str, Callable] = {
    "count-c4": cmd_count_c4,
    "m2-check": cmd_m2_check,
    "partition": cmd_partition,
    "decompose": cmd_decompose,
    "edit-indset": cmd_edit_indset,
    "farness": cmd_farness,
    "lowerbound": cmd_lowerbound,
    "pipeline-c4": _pipeline("c4"),
    "pipeline-chordal": _pipeline("chordal"),
    "report-audit": cmd_report_audit,
}


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--input", help="graph in edge-list format")
    common.add_argument("--epsilon", type=_rational)
    common.add_argument("--alpha", type=_rational)
    common.add_argument("--gamma", type=_rational)
    common.add_argument("--delta", type=_rational)
    common.add_argument("--seed", type=int)
    common.add_argument("--const-c", type=_rational)
    common.add_argument("--const-d", type=_rational)
    common.add_argument("--exact-cap", type=int)
    common.add_argument("--format", choices=("json", "text"), default="json")
    common.add_argument("--out", help="write the report here (atomically) instead of stdout")
    common.add_argument("--x", type=_vertex_list, help="comma-separated vertex list")
    common.add_argument("--y", type=_vertex_list, help="comma-separated vertex list")
    common.add_argument("--blocks", type=_block_list, help="clique blocks, e.g. '0,1,2;3,4,5'")
    common.add_argument("--property", "--family", dest="property", default="c4", help="c4 or chordal")
    common.add_argument("--k", type=int)
    common.add_argument("--f", type=int)
    common.add_argument("--family-dir", help="lowerbound: write the hard family here")
    common.add_argument("--report", help="report-audit: report to re-verify")

    parser = _Parser(prog="c4lab", description="Induced-C4 and chordality removal toolkit.")
    parser.add_argument("--version", action="version", version=f"c4lab {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    for name in COMMANDS:
        sub.add_parser(name, parents=[common])
    return parser


def _config(args) -> dict:
    skip = {"out", "format", "report", "family_dir"}
    return {k: v for k, v in sorted(vars(args).items()) if k not in skip}


def render_text(rep: dict) -> str:
    lines = [f"outcome: {rep['outcome']}"]
    for k, v in sorted(rep["counts"].items()):
        lines.append(f"  {k}: {v}")
    for c in rep["invariant_checks"]:
        lines.append(f"  [{'pass' if c['passed'] else 'FAIL'}] {c['name']}")
    if rep["error"]:
        lines.append(f"error: {rep['error']['kind']}: {rep['error']['message']}")
    return "\n".join(lines) + "\n"


def run(argv=None) -> tuple[dict, int]:
    """Parse ``argv``, execute, and return ``(report, exit status)``."""
    start = time.perf_counter()
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except InputError as exc:
        r = Run("?", {})
        r.outcome = "input-error"
        return r.report(0.0, {"kind": "input-error", "message": str(exc)}), 1
    r = Run(args.command, _config(args))
    status, error = 0, None
    try:
        if args.command in RANDOMIZED and args.seed is None:
            raise InputError(f"--seed is mandatory for {args.command}")
        handler = COMMANDS[args.command]
        if args.command in NEEDS_INPUT:
            _require(args, "input")
            handler(read_graph(args.input), args, r)
        else:
            handler(args, r)
        if not all(p for _, p in r.checks):
            raise StageFailure("checks", "an invariant check failed")
    except (StageFailure, BudgetExceeded, AssertionError) as exc:
        status = 2
        stage = getattr(exc, "stage", "budget" if isinstance(exc, BudgetExceeded) else "invariant")
        r.outcome = "stage-failure"
        error = {"kind": "stage-failure", "stage": stage, "message": str(exc)}
    except (InputError, GraphFormatError, PreconditionError, ValueError, OSError) as exc:
        status = 1
        r.outcome = "input-error"
        error = {"kind": "input-error", "message": str(exc)}
    return r.report((time.perf_counter() - start) * 1000, error), status


def main(argv=None) -> int:
    rep, status = run(argv)
    out = getattr(_peek_out(argv), "out", None)
    fmt = getattr(_peek_out(argv), "format", "json")
    text = render_text(rep) if fmt == "text" else json.dumps(rep, indent=2, sort_keys=True) + "\n"
    if out:
        try:
            write_text_atomic(out, text)
        except OSError as exc:
            sys.stderr.write(f"c4lab: cannot write {out}: {exc}\n")
            return 1
    else:
        sys.stdout.write(text)
    return status


def _peek_out(argv):
    # --out / --format must be honoured even when the main parse failed
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--out")
    p.add_argument("--format", default="json")
    ns, _ = p.parse_known_args(sys.argv[1:] if argv is None else argv)
    return ns


if __name__ == "__main__":
    sys.exit(main())
