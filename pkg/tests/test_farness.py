import functools
import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from c4lab.errors import BudgetExceeded
from c4lab.farness import (
    exact_edit_distance,
    farness_certificate,
    heuristic_upper_bound,
    packing_lower_bound,
    resolve_property,
)
from c4lab.generators import complete_bipartite, cycle_graph, random_graph
from c4lab.graph import Graph
from c4lab.indset import C4_ONLY, CHORDAL
from c4lab.kernels import is_chordal

import oracles


@functools.lru_cache(maxsize=None)
def c4_table(n):
    return oracles.edit_distance_table(n, lambda g: oracles.c4_count(g) == 0)


@functools.lru_cache(maxsize=None)
def chordal_table(n):
    return oracles.edit_distance_table(n, lambda g: not oracles.has_long_induced_cycle(g))


@st.composite
def small_graphs(draw, max_n=6):
    n = draw(st.integers(0, max_n))
    pairs = list(itertools.combinations(range(n), 2))
    chosen = draw(st.lists(st.booleans(), min_size=len(pairs), max_size=len(pairs)))
    return Graph.from_edges(n, [p for p, c in zip(pairs, chosen) if c])


class TestExamples:
    def test_c4_is_one_edit(self):
        cert = farness_certificate(cycle_graph(4), "c4")
        assert cert.lower == cert.exact == cert.upper == 1

    def test_c5_chordal(self):
        cert = farness_certificate(cycle_graph(5), "chordal")
        assert cert.exact == 1 == cert.lower  # delete any edge: a path
        assert farness_certificate(cycle_graph(5), "c4").exact == 0

    def test_k33(self):
        cert = farness_certificate(complete_bipartite(3, 3), "c4")
        assert cert.exact == c4_table(6)[complete_bipartite(3, 3).adj]
        assert cert.verify(complete_bipartite(3, 3))

    def test_aliases(self):
        assert resolve_property("C4") is C4_ONLY
        assert resolve_property("chordal") is CHORDAL
        with pytest.raises(ValueError):
            resolve_property("planar")

    def test_cap(self):
        with pytest.raises(BudgetExceeded):
            exact_edit_distance(cycle_graph(9), "c4")
        assert exact_edit_distance(cycle_graph(9), "c4", budget=3).distance == 0

    def test_budget_too_small(self):
        assert exact_edit_distance(complete_bipartite(3, 3), "c4", budget=1) is None

    def test_packing_is_pair_disjoint(self):
        g = random_graph(10, 0.5, 3)
        pk = packing_lower_bound(g)
        seen = set()
        for w in pk.witnesses:
            assert oracles.induces_cycle(g, w) and len(w) == 4
            pairs = {frozenset(p) for p in itertools.combinations(w, 2)}
            assert not pairs & seen
            seen |= pairs


class TestAgainstBFS:
    @settings(max_examples=120, deadline=None)
    @given(small_graphs())
    def test_c4_sandwich(self, g):
        true = c4_table(g.n)[g.adj]
        cert = farness_certificate(g, C4_ONLY)
        assert cert.lower <= cert.exact == true <= cert.upper

    @settings(max_examples=80, deadline=None)
    @given(small_graphs(max_n=6))
    def test_chordal_sandwich(self, g):
        true = chordal_table(g.n)[g.adj]
        cert = farness_certificate(g, CHORDAL)
        assert cert.lower <= cert.exact == true <= cert.upper
        assert is_chordal(g.toggled(cert.upper_edits.pairs()))

    @settings(max_examples=60, deadline=None)
    @given(small_graphs(max_n=8))
    def test_upper_bound_is_valid(self, g):
        ub = heuristic_upper_bound(g, "c4")
        assert oracles.c4_count(g.toggled(ub.edits.pairs())) == 0
        assert ub.count == len(ub.edits)
        assert packing_lower_bound(g).count <= ub.count
