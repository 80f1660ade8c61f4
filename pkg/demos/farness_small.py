"""Edit distance to induced-C4-freeness and to chordality on a few small graphs.

    python3 demos/farness_small.py
"""

from c4lab.farness import farness_certificate
from c4lab.generators import complete_bipartite, cycle_graph, random_graph
from c4lab.lowerbound import blowup_cycle

graphs = {
    "C4": cycle_graph(4),
    "C5": cycle_graph(5),
    "C6": cycle_graph(6),
    "K33": complete_bipartite(3, 3),
    "B(4,2)": blowup_cycle(4, 2).graph,
    "G(8,1/2)": random_graph(8, 0.5, 1),
}

print(f"{'graph':10} {'property':15} {'lower':>5} {'exact':>5} {'upper':>5}  strategy")
for name, g in graphs.items():
    for prop in ("c4", "chordal"):
        c = farness_certificate(g, prop)
        print(f"{name:10} {c.property:15} {c.lower:5d} {c.exact:5d} {c.upper:5d}  {c.strategy}")
