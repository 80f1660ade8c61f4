from fractions import Fraction

import pytest

from c4lab.errors import PreconditionError, StageFailure
from c4lab.generators import complete_graph, from_blocks, half_graph_pair, random_chain_cliques
from c4lab.graph import Graph
from c4lab.partition import (
    Partition,
    block_bound,
    chain_r,
    delta_homog_refinement,
    homogeneity_deficiency,
    is_equipartition,
    refines,
    strong_homog_partition,
)

import oracles


def two_chain_cliques(m):
    """Two ``m``-cliques joined by a half graph."""
    half, xs, ys = half_graph_pair(m)
    extra = [e for e in half.edges]
    return from_blocks(2 * m, [xs, ys], extra), Partition.of([xs, ys])


class TestPartition:
    def test_validation(self):
        with pytest.raises(ValueError):
            Partition.of([[0, 1], [1, 2]])
        p = Partition.of([[2, 0], [], [1]])
        assert p.blocks == ((0, 2), (1,)) and len(p) == 2

    def test_refines(self):
        coarse = Partition.of([[0, 1, 2], [3, 4]])
        assert refines(Partition.of([[0], [1, 2], [3, 4]]), coarse)
        assert not refines(Partition.of([[0, 3], [1, 2], [4]]), coarse)

    def test_equipartition(self):
        assert is_equipartition([[0, 1], [2]])
        assert not is_equipartition([[0, 1, 2], [3]])

    def test_deficiency_matches_oracle(self):
        g, part = two_chain_cliques(4)
        led = homogeneity_deficiency(g, part)
        assert led.deficiency == oracles.deficiency(g, part.blocks) == 16
        assert led.recompute() == led.deficiency


class TestRefinement:
    def test_chain_r_and_bound(self):
        assert chain_r(Fraction(1, 3)) == 3
        assert chain_r(Fraction(2, 5)) == 3
        assert block_bound(2, Fraction(1, 2)) == 32

    def test_rejects_non_clique(self):
        g = Graph.from_edges(4, [(0, 1), (2, 3)])
        with pytest.raises(PreconditionError):
            delta_homog_refinement(g, Partition.of([[0, 1, 2], [3]]), Fraction(1, 4))

    def test_rejects_m2(self):
        g = from_blocks(4, [[0, 1], [2, 3]], [(0, 2), (1, 3)])
        with pytest.raises(PreconditionError):
            delta_homog_refinement(g, Partition.of([[0, 1], [2, 3]]), Fraction(1, 4))

    def test_delta_range(self):
        g = complete_graph(3)
        with pytest.raises(ValueError):
            delta_homog_refinement(g, Partition.of([[0, 1, 2]]), 1)

    def test_half_graph_pair(self):
        g, cliques = two_chain_cliques(6)
        delta = Fraction(1, 8)
        part, led = delta_homog_refinement(g, cliques, delta)
        assert refines(part, cliques)
        assert led.deficiency == oracles.deficiency(g, part.blocks) <= delta * 144
        assert len(part) <= block_bound(2, delta)

    @pytest.mark.parametrize("seed", range(30))
    def test_random_clique_systems(self, seed):
        rng_sizes = [3 + (seed * 7 + i * 5) % 5 for i in range(1 + seed % 4)]
        g, blocks = random_chain_cliques(rng_sizes, seed)
        cliques = Partition.of(blocks)
        n = g.n
        for delta in (Fraction(1, 2), Fraction(1, 5), Fraction(1, 10)):
            part, led = delta_homog_refinement(g, cliques, delta)
            assert refines(part, cliques)
            assert led.deficiency == oracles.deficiency(g, part.blocks)
            assert led.deficiency <= delta * n * n
            assert len(part) <= block_bound(len(blocks), delta)


class TestStrongPartition:
    @pytest.mark.parametrize("seed", range(30))
    def test_clauses(self, seed):
        sizes = [4 + (seed + i * 3) % 5 for i in range(2 + seed % 3)]
        g, blocks = random_chain_cliques(sizes, seed)
        cliques = Partition.of(blocks)
        n = g.n
        delta = Fraction(1, 5)
        sp = strong_homog_partition(g, cliques, delta, seed)
        assert len(sp.z) < delta * n
        assert sorted(sp.z + sp.q_blocks.ground) == list(range(n))
        assert refines(sp.q_blocks, Partition.of([[v for v in b if v not in sp.z] for b in blocks]))
        assert oracles.deficiency(g, sp.q_blocks.blocks) <= delta * n * n
        for w, q in zip(sp.w_subsets, sp.q_blocks.blocks):
            assert w and set(w) <= set(q)
        ws = sp.w_subsets
        for i in range(len(ws)):
            for j in range(i + 1, len(ws)):
                assert oracles.is_homogeneous(g, ws[i], ws[j])
        assert 1 <= sp.attempts <= 64 and len(sp.transcript) == sp.attempts
        assert sp.transcript[-1]["failed_pair"] is None

    def test_deterministic_given_seed(self):
        g, blocks = random_chain_cliques([5, 6, 4], 3)
        a = strong_homog_partition(g, Partition.of(blocks), Fraction(1, 4), 9)
        b = strong_homog_partition(g, Partition.of(blocks), Fraction(1, 4), 9)
        assert a.w_subsets == b.w_subsets and a.transcript == b.transcript

    def test_retry_exhaustion_reports_transcript(self):
        # W must be a whole fine block; zero retries forces the structured failure
        g, blocks = random_chain_cliques([4, 4], 0)
        with pytest.raises(StageFailure) as exc:
            strong_homog_partition(g, Partition.of(blocks), Fraction(1, 4), 0, max_retries=0)
        assert exc.value.stage == "strong-partition"
