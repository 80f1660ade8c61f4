from fractions import Fraction

import numpy as np
import pytest

from c4lab.decomposition import (
    C4Rich,
    ConstantsConfig,
    PeelResult,
    SamplerConfig,
    StructureReport,
    c4_rich_threshold,
    conditional_regularity,
    find_dense_subset,
    ghs_check,
    homogenize_on_w,
    peel_decomposition,
    sample_clique_test,
    sample_density_test,
    structure_clauses,
)
from c4lab.errors import DegenerateSetError, PreconditionError, StageFailure
from c4lab.generators import complete_graph, cycle_graph, disjoint_union, random_graph
from c4lab.graph import Graph, density
from c4lab.kernels import is_clique
from c4lab.lowerbound import blowup_cycle

import oracles


class TestSamplers:
    def test_default_sizes(self):
        assert SamplerConfig.default_q(Fraction(1, 2)) == 3200
        assert SamplerConfig.default_r(Fraction(1, 5)) == 2500

    def test_clique_test_on_clique(self):
        g = complete_graph(30)
        v = sample_clique_test(g, SamplerConfig(q=10, rho=Fraction(1, 2), eps=Fraction(1, 10)), 0)
        assert v.verdict == "looks-close" and v.value == 10 and is_clique(g, v.witness)

    def test_clique_test_on_empty(self):
        v = sample_clique_test(Graph.empty(30), SamplerConfig(q=20, rho=Fraction(1, 2), eps=Fraction(1, 10)), 0)
        assert v.verdict == "looks-far" and v.value == 1

    def test_clique_test_eps_guard(self):
        with pytest.raises(ValueError):
            sample_clique_test(complete_graph(5), SamplerConfig(q=3, rho=Fraction(1, 2), eps=Fraction(1, 4)), 0)

    def test_density_requires_large_r(self):
        g = complete_graph(300)
        with pytest.raises(ValueError):
            sample_density_test(g, SamplerConfig(alpha=Fraction(1, 5), r=50), 0)
        assert sample_density_test(g, SamplerConfig(alpha=Fraction(9, 10), r=124), 0).verdict == "pass"

    def test_density_exact_count(self):
        g = random_graph(40, 0.5, 2)
        v = sample_density_test(g, SamplerConfig(alpha=Fraction(1, 5), r=40), 0)
        assert v.value == g.m and v.threshold == Fraction(1, 10) * 1600

    def test_density_calibration_uncapped(self):
        """r = ceil(100/alpha^2) = 494 from n = 1000: pass rate clears 2/3 comfortably."""
        alpha = Fraction(9, 20)
        r = SamplerConfig.default_r(alpha)
        g = random_graph(1000, 0.95, 4)
        assert g.m >= alpha * 1000 ** 2
        cfg = SamplerConfig(alpha=alpha, r=r)
        rng = np.random.default_rng(5)
        passes = sum(sample_density_test(g, cfg, rng).verdict == "pass" for _ in range(30))
        assert passes / 30 >= 2 / 3


class TestDenseSubset:
    def test_finds_clique(self):
        g = disjoint_union(complete_graph(8), Graph.empty(8))
        assert find_dense_subset(g, 4, Fraction(9, 10)) == tuple(range(8))

    def test_none_on_sparse(self):
        assert find_dense_subset(Graph.empty(10), 3, Fraction(1, 2)) is None

    def test_min_size_guard(self):
        with pytest.raises(DegenerateSetError):
            find_dense_subset(complete_graph(4), 1, 1)

    @pytest.mark.parametrize("seed", range(20))
    def test_output_meets_request(self, seed):
        g = random_graph(14, 0.6, seed)
        s = find_dense_subset(g, 4, Fraction(3, 4))
        if s is not None:
            assert len(s) >= 4 and density(g, s) >= Fraction(3, 4)
        else:
            # the exhaustive fallback covers n <= 16: None means there truly is none
            import itertools
            assert not any(
                density(g, c) >= Fraction(3, 4) for k in range(4, 15) for c in itertools.combinations(range(14), k)
            )

    def test_within(self):
        g = disjoint_union(complete_graph(5), complete_graph(5))
        assert set(find_dense_subset(g, 3, 1, within=range(5, 10))) == set(range(5, 10))


class TestGHS:
    def test_on_blowup(self):
        res = ghs_check(blowup_cycle(5, 3).graph)
        assert res.holds and res.omega == 6

    def test_rejects_c4(self):
        with pytest.raises(PreconditionError) as exc:
            ghs_check(cycle_graph(4))
        assert sorted(exc.value.witness) == [0, 1, 2, 3]

    def test_empty(self):
        assert ghs_check(Graph.empty(0)).holds


class TestPeel:
    def test_clique_plus_independent(self):
        g = disjoint_union(complete_graph(8), Graph.empty(8))
        # 28 edges against alpha n^2 = 25.6
        res = peel_decomposition(g, Fraction(1, 10), Fraction(3, 10))
        assert isinstance(res, PeelResult)
        assert res.x_blocks == (tuple(range(8)),) and res.y == tuple(range(8, 16))

    def test_joined_cliques_single_block(self):
        g = complete_graph(12)
        res = peel_decomposition(g, Fraction(1, 5), Fraction(3, 10))
        assert res.k == 1 and len(res.x_blocks[0]) == 12

    def test_sparse_is_all_y(self):
        res = peel_decomposition(cycle_graph(10), Fraction(1, 5), Fraction(3, 10))
        assert res.k == 0 and len(res.y) == 10

    def test_finder_failure_rich(self):
        from c4lab.generators import complete_bipartite

        g = complete_bipartite(6, 6)
        # 225 induced C4s against (alpha gamma)^1 n^4 = 207.36
        res = peel_decomposition(g, Fraction(1, 5), Fraction(1, 20), lambda *a: None, constants=ConstantsConfig(c=1))
        assert isinstance(res, C4Rich) and res.count == oracles.c4_count(g)
        assert res.count >= res.threshold

    def test_finder_failure_structured(self):
        g = complete_graph(10)
        with pytest.raises(StageFailure) as exc:
            peel_decomposition(g, Fraction(1, 5), Fraction(3, 10), lambda *a: None)
        assert exc.value.stage == "peel" and exc.value.detail["residual_c4"] == 0

    def test_threshold(self):
        assert c4_rich_threshold(10, Fraction(1, 2), Fraction(1, 2), ConstantsConfig(c=2)) == Fraction(10 ** 4, 16)


def _recheck(sr: StructureReport):
    assert oracles.structure_violations(sr) == []


class TestConditionalRegularity:
    @pytest.mark.parametrize("seed", range(20))
    def test_random_reports_pass_clauses(self, seed):
        g = random_graph(20, 0.3 + 0.02 * seed, seed)
        try:
            sr = conditional_regularity(g, Fraction(1, 5), Fraction(3, 10), seed)
        except StageFailure as exc:
            assert exc.stage in {"peel", "m2-edit", "strong-partition", "clauses"}
            return
        if isinstance(sr, C4Rich):
            assert sr.count >= sr.threshold
            return
        assert all(ok for _, ok in sr.checks)
        assert dict(structure_clauses(sr)) == dict(sr.checks)
        _recheck(sr)

    def test_blowup(self):
        b = blowup_cycle(5, 4)
        sr = conditional_regularity(b.graph, Fraction(1, 20), Fraction(3, 10), 0)
        assert isinstance(sr, StructureReport)
        _recheck(sr)
        h = homogenize_on_w(sr)
        ws, q = sr.w_subsets, sr.q_blocks
        for i in range(len(q)):
            for j in range(i + 1, len(q)):
                assert oracles.is_homogeneous(h, q[i], q[j])

    def test_seed_determinism(self):
        g = random_graph(22, 0.5, 8)
        a = conditional_regularity(g, Fraction(1, 5), Fraction(3, 10), 4)
        b = conditional_regularity(g, Fraction(1, 5), Fraction(3, 10), 4)
        assert type(a) is type(b)
        if isinstance(a, StructureReport):
            assert a.g_prime == b.g_prime and a.w_subsets == b.w_subsets

    def test_threads_do_not_change_result(self, monkeypatch):
        g = random_graph(24, 0.55, 12)
        base = conditional_regularity(g, Fraction(1, 5), Fraction(3, 10), 1)
        monkeypatch.setenv("C4LAB_THREADS", "4")
        threaded = conditional_regularity(g, Fraction(1, 5), Fraction(3, 10), 1)
        assert type(base) is type(threaded)
        if isinstance(base, StructureReport):
            assert base.g_prime == threaded.g_prime
