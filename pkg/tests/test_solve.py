import pytest
from hypothesis import given, settings

from coarse_menger.core import Graph, menger, path_graph
from coarse_menger.errors import InputError, SizeError
from coarse_menger.fixtures import gen_grid
from coarse_menger.planar import random_planar
from coarse_menger.solve import (
    CoverCertificate,
    PackCertificate,
    certificate_from_doc,
    duality_report,
    greedy_cover,
    greedy_packing,
    max_packing_exact,
    min_cover_exact,
    verify_cover,
    verify_pack,
)

from conftest import brute_cover, brute_pack, graphs_with_terminals, random_graph, separates

GRID_S, GRID_T = {0, 3, 6}, {2, 5, 8}


class TestExamples:
    def test_pack_path(self, p3):
        assert max_packing_exact(p3, {0}, {2}, 0).order == 1

    def test_pack_grid(self):
        cert = max_packing_exact(gen_grid(3, 3), GRID_S, GRID_T, 1)
        assert cert.order == 2 and cert.exact

    def test_pack_no_terminals(self, p3):
        assert max_packing_exact(p3, {0}, set(), 1).order == 0

    def test_cover_path(self, p3):
        cert = min_cover_exact(p3, {0}, {2}, 1)
        assert cert.size == 1
        assert separates(p3, {0}, {2}, {v for c in cert.centers for v in range(3) if abs(v - c) <= 1})

    def test_cover_without_paths(self):
        g = Graph(4, frozenset({(0, 1), (2, 3)}))
        assert min_cover_exact(g, {0}, {3}, 1).centers == frozenset()

    def test_cover_two_far_components(self):
        # two disjoint S-T paths in separate components
        g = Graph(6, frozenset({(0, 1), (1, 2), (3, 4), (4, 5)}))
        assert min_cover_exact(g, {0, 3}, {2, 5}, 1).size == 2

    def test_greedy_examples(self, p3):
        assert greedy_packing(p3, {0}, {2}, 0).order == 1
        assert greedy_packing(p3, {0}, set(), 0).order == 0
        assert greedy_cover(p3, {0}, {2}, 1).size == 1
        g = Graph(4, frozenset({(0, 1), (2, 3)}))
        assert greedy_cover(g, {0}, {3}, 1).size == 0
        grid = gen_grid(3, 3)
        assert 1 <= greedy_packing(grid, GRID_S, GRID_T, 1).order <= 2

    def test_duality_examples(self, p3):
        rep = duality_report(p3, {0}, {2}, 1, 2)
        assert (rep.nu, rep.tau) == (1, 1)
        rep = duality_report(p3, {0}, set(), 1, 2)
        assert (rep.nu, rep.tau) == (0, 0)

    def test_size_cap(self):
        with pytest.raises(SizeError):
            max_packing_exact(path_graph(41), {0}, {40}, 1)
        with pytest.raises(SizeError):
            min_cover_exact(path_graph(41), {0}, {40}, 1)

    def test_negative_d(self, p3):
        with pytest.raises(InputError):
            max_packing_exact(p3, {0}, {2}, -1)


class TestAgainstBruteForce:
    @given(graphs_with_terminals())
    @settings(max_examples=120, deadline=None)
    def test_pack_and_cover_values(self, inst):
        g, s, t = inst
        for d in (0, 1, 2):
            pack = max_packing_exact(g, s, t, d)
            cover = min_cover_exact(g, s, t, d)
            assert pack.exact and cover.exact
            assert pack.order == brute_pack(g, s, t, d)
            assert cover.size == brute_cover(g, s, t, d)
            assert verify_pack(g, s, t, pack)[0]
            assert verify_cover(g, s, t, cover)[0]

    @given(graphs_with_terminals())
    @settings(max_examples=120, deadline=None)
    def test_zero_distance_is_menger(self, inst):
        g, s, t = inst
        m = len(menger(g, s, t)[0])
        assert max_packing_exact(g, s, t, 0).order == m
        assert min_cover_exact(g, s, t, 0).size == m

    @given(graphs_with_terminals())
    @settings(max_examples=80, deadline=None)
    def test_monotone_in_d(self, inst):
        g, s, t = inst
        nus = [max_packing_exact(g, s, t, d).order for d in range(4)]
        taus = [min_cover_exact(g, s, t, d).size for d in range(4)]
        assert nus == sorted(nus, reverse=True)
        assert taus == sorted(taus, reverse=True)

    @given(graphs_with_terminals())
    @settings(max_examples=80, deadline=None)
    def test_greedy_bounds(self, inst):
        g, s, t = inst
        for d in (0, 1, 2):
            gp = greedy_packing(g, s, t, d)
            gc = greedy_cover(g, s, t, d, seed=7)
            assert verify_pack(g, s, t, gp)[0] and verify_cover(g, s, t, gc)[0]
            assert gp.order <= max_packing_exact(g, s, t, d).order
            assert gc.size >= min_cover_exact(g, s, t, d).size


class TestCertificates:
    def test_round_trip(self, p3):
        pack = max_packing_exact(p3, {0}, {2}, 1)
        assert certificate_from_doc(pack.to_doc()).paths == pack.paths
        cover = min_cover_exact(p3, {0}, {2}, 1)
        assert certificate_from_doc(cover.to_doc()).centers == cover.centers

    @pytest.mark.parametrize("doc", [
        {"kind": "pack", "d": -1, "paths": []},
        {"kind": "other", "d": 0},
        {"kind": "pack", "d": 0},
        {"d": 0, "paths": []},
    ])
    def test_malformed(self, doc):
        with pytest.raises(InputError):
            certificate_from_doc(doc)

    def test_rejections(self, p3):
        assert not verify_pack(p3, {0}, {2}, PackCertificate(((0, 1),), 0))[0]
        assert not verify_pack(p3, {0, 2}, {0, 2}, PackCertificate(((0,), (2,)), 2))[0]
        assert not verify_cover(p3, {0}, {2}, CoverCertificate(frozenset(), 0))[0]
        assert not verify_cover(p3, {0}, {2}, CoverCertificate(frozenset({7}), 0))[0]


class TestBudget:
    def test_tiny_budget_is_flagged(self):
        g = random_planar(5, 30)
        s, t = {0, 1, 2}, {27, 28, 29}
        pack = max_packing_exact(g, s, t, 1, budget=1)
        cover = min_cover_exact(g, s, t, 1, budget=1)
        assert verify_pack(g, s, t, pack)[0] and verify_cover(g, s, t, cover)[0]
        full_p = max_packing_exact(g, s, t, 1)
        full_c = min_cover_exact(g, s, t, 1)
        assert pack.exact is False or pack.order == full_p.order
        assert cover.exact is False or cover.size == full_c.size

    def test_deterministic(self):
        g = random_graph(11, 12, 0.3)
        a = duality_report(g, {0, 1}, {10, 11}, 1, 3, seed=4).to_doc()
        b = duality_report(g, {0, 1}, {10, 11}, 1, 3, seed=4).to_doc()
        assert a == b


class TestRandomPlanar:
    def test_single_vertex(self):
        assert random_planar(0, 1).n == 1

    def test_seeded(self):
        assert random_planar(9, 25) == random_planar(9, 25)

    def test_planar_and_connected(self):
        import networkx as nx

        from conftest import to_nx

        for seed in range(20):
            g = random_planar(seed, 30, 0.7)
            assert g.m <= 3 * 30 - 6
            h = to_nx(g)
            assert nx.check_planarity(h)[0] and nx.is_connected(h)

    @pytest.mark.parametrize("bad", [dict(n=0), dict(n=5, density=1.5)])
    def test_rejects(self, bad):
        with pytest.raises(InputError):
            random_planar(0, **bad)
