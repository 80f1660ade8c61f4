"""Cycle blow-ups: edge counts, transversal cycles, and how little one edit destroys.

    python3 demos/blowup_family.py [output-dir]
"""

import sys
import tempfile

from c4lab.kernels import count_induced_c4, max_clique
from c4lab.lowerbound import (
    blowup_cycle,
    blowup_edge_count,
    build_hard_family,
    single_edit_destruction,
    transversal_cycle_hypergraph,
    verify_no_short_induced_cycles,
    write_hard_family,
)

for k, f in [(5, 2), (5, 3), (6, 2), (7, 2)]:
    b = blowup_cycle(k, f)
    ok, _ = verify_no_short_induced_cycles(b.graph, b.parts, k)
    h = transversal_cycle_hypergraph(b.graph, b.parts)
    print(f"B({k},{f}): n={b.graph.n} m={b.graph.m} (formula {blowup_edge_count(k, f)}),"
          f" omega={max_clique(b.graph)[0]}, induced C4s={count_induced_c4(b.graph)},"
          f" no induced cycle of length 4..{k - 1}: {ok}, transversal C{k}s={len(h)}")

for f in (2, 3):
    worst, pair = single_edit_destruction(5, f)
    print(f"B(5,{f}): one toggle removes at most {worst} transversal C5s (pair {pair}), f^3 = {f ** 3}")

out = sys.argv[1] if len(sys.argv) > 1 else tempfile.mkdtemp(prefix="c4lab-family-")
manifest = write_hard_family(out, build_hard_family(lambda eps: 2, range(5, 8)))
print(f"hard family written to {manifest.parent}")
