from math import comb

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from c4lab.errors import PreconditionError
from c4lab.generators import random_chordal, random_split_like
from c4lab.graph import Graph
from c4lab.indset import (
    C4_ONLY,
    CHORDAL,
    AntiMatching,
    FamilyDescriptor,
    c4_lower_bound_certificate,
    d2,
    indset_edit,
    maximal_antimatching,
)
from c4lab.kernels import count_induced_c4, is_chordal

import oracles


def example_graph():
    """X is the path 0-1-2, Y = {3, 4} is complete to X; 0, 3, 2, 4 is the only induced C4."""
    edges = [(0, 1), (1, 2)] + [(x, y) for x in range(3) for y in (3, 4)]
    return Graph.from_edges(5, edges), [0, 1, 2], [3, 4]


def chordal_with_y(n_x, n_y, p, seed):
    """Chordal X on the first ``n_x`` vertices plus independent Y with random edges to X."""
    base = random_chordal(n_x, seed)
    rng = np.random.default_rng(seed + 10_000)
    edges = list(base.edges)
    edges += [(x, n_x + j) for x in range(n_x) for j in range(n_y) if rng.random() < p]
    return Graph.from_edges(n_x + n_y, edges), list(range(n_x)), list(range(n_x, n_x + n_y))


class TestAntiMatching:
    def test_example(self):
        g, x, y = example_graph()
        am = maximal_antimatching(g, x, 3)
        assert am.pairs == ((0, 2),) and am.verify(g, x)

    def test_verify_rejects(self):
        g, x, _ = example_graph()
        assert not AntiMatching(3, ((0, 1),)).verify(g, x)  # an edge
        assert not AntiMatching(3, ()).verify(g, x)  # not maximal

    def test_owner_outside_x(self):
        g, x, _ = example_graph()
        with pytest.raises(ValueError):
            maximal_antimatching(g, x, 0)

    def test_d2(self):
        g, x, _ = example_graph()
        assert d2(g, x, 3) == 1
        assert d2(g, x, 4) == 1

    @pytest.mark.parametrize("seed", range(10))
    def test_shuffled_is_still_maximal(self, seed):
        g, x, y = chordal_with_y(10, 3, 0.7, seed)
        for v in y:
            am = maximal_antimatching(g, x, v, rng=seed)
            assert am.verify(g, x)
            assert d2(g, x, v) >= len(am) ** 2 / 2


class TestIndsetEdit:
    def test_example(self):
        g, x, y = example_graph()
        assert count_induced_c4(g) == 1
        out, edits, ms = indset_edit(g, x, y)
        assert [m.pairs for m in ms] == [((0, 2),), ((0, 2),)]
        assert len(edits) == 4 and all(op == "delete" for _, _, op in edits)
        assert count_induced_c4(out) == 0

    def test_certificate_example(self):
        g, x, y = example_graph()
        cert = c4_lower_bound_certificate(g, x, y)
        assert cert.certified_count == 1 == oracles.c4_count(g)
        assert cert.sum_d2 == 2

    def test_dependent_y_rejected(self):
        g = Graph.from_edges(4, [(2, 3), (0, 2)])
        with pytest.raises(PreconditionError) as exc:
            indset_edit(g, [0, 1], [2, 3])
        assert exc.value.witness == (2, 3)

    def test_x_with_c4_rejected(self):
        g = Graph.from_edges(5, [(0, 1), (1, 2), (2, 3), (3, 0)])
        with pytest.raises(PreconditionError) as exc:
            indset_edit(g, [0, 1, 2, 3], [4])
        assert sorted(exc.value.witness) == [0, 1, 2, 3]

    def test_chordal_family_checks_long_cycles(self):
        c5 = [(i, (i + 1) % 5) for i in range(5)]
        g = Graph.from_edges(6, c5)
        indset_edit(g, range(5), [5], C4_ONLY)  # C5 is fine for the C4 family
        with pytest.raises(PreconditionError):
            indset_edit(g, range(5), [5], CHORDAL)

    def test_family_names(self):
        with pytest.raises(ValueError):
            FamilyDescriptor("bogus")

    @settings(max_examples=60, deadline=None)
    @given(st.integers(0, 10 ** 6), st.integers(1, 4), st.integers(1, 6), st.floats(0.1, 0.9))
    def test_c4_family_property(self, seed, k, n_y, p):
        sizes = [1 + (seed >> (2 * i)) % 4 for i in range(k)]
        g, x, y = random_split_like(sizes, n_y, p, seed)
        out, edits, ms = indset_edit(g, x, y, C4_ONLY, rng=seed)
        assert oracles.c4_count(out) == 0
        assert len(edits) == 2 * sum(len(m) for m in ms)
        for m in ms:
            assert d2(g, x, m.owner) >= len(m) ** 2 / 2
        cert = c4_lower_bound_certificate(g, x, y)
        assert cert.analytic_bound <= cert.certified_count <= oracles.c4_count(g)

    @settings(max_examples=40, deadline=None)
    @given(st.integers(0, 10 ** 6), st.integers(3, 9), st.integers(1, 5))
    def test_chordal_family_property(self, seed, n_x, n_y):
        g, x, y = chordal_with_y(n_x, n_y, 0.6, seed)
        out, edits, ms = indset_edit(g, x, y, CHORDAL)
        assert is_chordal(out.induced_subgraph(x + y)[0])
        assert not oracles.has_long_induced_cycle(out.induced_subgraph(x + y)[0])
        assert len(edits) == 2 * sum(len(m) for m in ms)

    def test_jensen_bound(self):
        # Y complete to an independent X: every X pair has |Y| common neighbours
        n_x, n_y = 5, 4
        g = Graph.from_edges(n_x + n_y, [(a, n_x + b) for a in range(n_x) for b in range(n_y)])
        cert = c4_lower_bound_certificate(g, range(n_x), range(n_x, n_x + n_y))
        assert cert.certified_count == comb(n_x, 2) * comb(n_y, 2) == oracles.c4_count(g)
        assert cert.analytic_bound == cert.certified_count
