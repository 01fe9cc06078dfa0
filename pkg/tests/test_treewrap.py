import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from coarse_menger.core import Graph, path_graph
from coarse_menger.core.bits import mask_of
from coarse_menger.errors import ContractError, InputError
from coarse_menger.fixtures import chain_gtd, grid_gtd, path_gtd, spider_gtd
from coarse_menger.treewrap import (
    ExplicitFamily,
    GTDNode,
    GuardedTreeDecomposition,
    STPaths,
    cover_hits,
    guards_check,
    pack_or_cover,
    pack_or_hit,
    validate_gtd,
)

from conftest import all_st_paths, graphs_with_terminals, nx_ball, nx_dist


def members_of(g, family):
    if isinstance(family, ExplicitFamily):
        return [set(m) for m in family.members]
    return [set(p) for p in all_st_paths(g, family.s, family.t)]


def guards_oracle(g, gtd, family, d):
    ms = members_of(g, family)
    for x in gtd.nodes:
        reach = nx_ball(g, x.gamma, d)
        if any(m & x.beta and not m & reach for m in ms):
            return False
    return True


def check_pack_or_hit(g, gtd, family, d):
    res = pack_or_hit(g, gtd, family, d)
    assert len(res.witness_nodes) == len(res.scattered)
    assert len(set(res.witness_nodes)) == len(res.witness_nodes)
    for a, b in itertools.combinations(res.scattered, 2):
        assert nx_dist(g, a, b) > d
    hit = nx_ball(g, set().union(*(gtd.node(i).gamma for i in res.witness_nodes)), d)
    ms = members_of(g, family)
    assert all(m & hit for m in ms)
    assert all(set(m) in ms for m in res.scattered)
    return res


def check_pack_or_cover(g, gtd, family, d, k):
    out = pack_or_cover(g, gtd, family, d, k)
    if out.kind == "pack":
        assert len(out.members) == k
        for a, b in itertools.combinations(out.members, 2):
            assert nx_dist(g, a, b) > d
    else:
        assert len(out.cover) <= gtd.vigilance * (k - 1)
        hit = nx_ball(g, out.cover, d)
        assert all(m & hit for m in members_of(g, family))
    return out


def random_connected_family(g, seed, count=6):
    rng = np.random.Generator(np.random.PCG64(seed))
    out = []
    for _ in range(count):
        c = int(rng.integers(0, g.n))
        out.append(nx_ball(g, {c}, int(rng.integers(0, 2))))
    return ExplicitFamily(out)


class TestValidate:
    def test_single_node(self, p3):
        gtd = chain_gtd([set(range(3))])
        assert validate_gtd(p3, gtd) == (True, [])

    def test_missing_edge(self, p3):
        gtd = chain_gtd([{0, 1}, {2}])
        ok, why = validate_gtd(p3, gtd)
        assert not ok and why[0].startswith("edge coverage")

    def test_guard_misses_adhesion(self, p3):
        gtd = GuardedTreeDecomposition((GTDNode(0, None, frozenset({0, 1}), frozenset({0, 1})),
                                        GTDNode(1, 0, frozenset({1, 2}), frozenset({2}))))
        ok, why = validate_gtd(p3, gtd)
        assert not ok and why[0].startswith("guard adhesion")

    def test_other_axioms(self, p3):
        assert validate_gtd(p3, chain_gtd([{0, 1}]))[1][0].startswith("vertex coverage")
        assert validate_gtd(p3, chain_gtd([{0, 1}, {1, 2}, {0}]))[1][0].startswith("contiguity")
        gtd = GuardedTreeDecomposition((GTDNode(0, None, frozenset({0, 1, 2}), frozenset({5})),))
        assert validate_gtd(p3, gtd)[1][0].startswith("guard containment")

    @pytest.mark.parametrize("nodes", [
        (),
        (GTDNode(0, None, frozenset(), frozenset()), GTDNode(1, None, frozenset(), frozenset())),
        (GTDNode(0, None, frozenset(), frozenset()), GTDNode(1, 7, frozenset(), frozenset())),
        (GTDNode(0, None, frozenset(), frozenset()), GTDNode(1, 2, frozenset(), frozenset()),
         GTDNode(2, 1, frozenset(), frozenset())),
    ])
    def test_malformed_trees(self, nodes):
        with pytest.raises(InputError):
            GuardedTreeDecomposition(nodes)

    def test_round_trip_and_shape(self):
        g, gtd = spider_gtd(3, 2)
        assert GuardedTreeDecomposition.from_doc(gtd.to_doc()) == gtd
        assert gtd.children(0) == [1, 3, 5]
        assert gtd.subtree(3) == [3, 4]
        assert gtd.adhesion == 1 and gtd.vigilance == 2
        assert validate_gtd(g, gtd)[0]

    def test_fixtures_are_valid(self):
        for g, gtd in (path_gtd(7), grid_gtd(3, 4), grid_gtd(2, 1), spider_gtd(4, 3)):
            assert validate_gtd(g, gtd)[0]


class TestGuards:
    def test_full_guards(self):
        g, gtd = grid_gtd(3, 4)
        fam = STPaths({0, 4, 8}, {3, 7, 11})
        assert guards_check(g, gtd, fam, 0)

    def test_narrow_guard_fails(self):
        g = path_graph(7)
        nodes = [GTDNode(i, None if i == 0 else i - 1, frozenset({i, i + 1}), frozenset({i})) for i in range(6)]
        gtd = GuardedTreeDecomposition(tuple(nodes))
        fam = ExplicitFamily([{4, 5, 6}])
        assert not guards_check(g, gtd, fam, 0)
        assert guards_check(g, gtd, fam, 1)

    def test_large_radius(self):
        g = path_graph(7)
        nodes = [GTDNode(i, None if i == 0 else i - 1, frozenset({i, i + 1}), frozenset({i})) for i in range(6)]
        gtd = GuardedTreeDecomposition(tuple(nodes))
        assert guards_check(g, gtd, STPaths({0}, {6}), 6)

    @given(graphs_with_terminals(), st.integers(0, 2), st.data())
    @settings(max_examples=80, deadline=None)
    def test_against_oracle(self, inst, d, data):
        g, s, t = inst
        # vertex-ordering path decomposition: bag i holds order[i] and every earlier
        # vertex with a neighbour at position >= i; guards keep the adhesion plus extras
        order = data.draw(st.permutations(range(g.n)))
        pos = {v: i for i, v in enumerate(order)}
        bags = [{order[i]} | {u for u in order[:i] if any(pos[w] >= i for w in g.adj[u])}
                for i in range(g.n)]
        nodes = []
        for i, b in enumerate(bags):
            adh = b & bags[i - 1] if i else set()
            extra = data.draw(st.sets(st.sampled_from(sorted(b))))
            nodes.append(GTDNode(i, None if i == 0 else i - 1, frozenset(b), frozenset(adh | extra)))
        gtd = GuardedTreeDecomposition(tuple(nodes))
        assert validate_gtd(g, gtd)[0]
        fam = STPaths(s, t)
        assert guards_check(g, gtd, fam, d) == guards_oracle(g, gtd, fam, d)


class TestSTFamily:
    @given(graphs_with_terminals(), st.data())
    @settings(max_examples=100, deadline=None)
    def test_survival_matches_enumeration(self, inst, data):
        g, s, t = inst
        allowed = data.draw(st.sets(st.integers(0, g.n - 1)))
        touch = data.draw(st.sets(st.integers(0, g.n - 1)))
        fam = STPaths(s, t)
        inside = all_st_paths(g, s, t, within=allowed)
        found = fam.find(g, mask_of(allowed))
        assert (found is None) == (not inside)
        if found is not None:
            assert found in inside and len(found) == len(inside[0])
        hit = fam.meeting(g, mask_of(allowed), mask_of(touch))
        assert (hit is None) == (not any(set(p) & touch for p in inside))


class TestPackOrHit:
    def test_empty_family(self):
        g, gtd = path_gtd(5)
        res = pack_or_hit(g, gtd, ExplicitFamily([]), 1)
        assert res.scattered == () and res.witness_nodes == ()

    def test_three_singletons(self):
        g, gtd = path_gtd(7)
        res = check_pack_or_hit(g, gtd, ExplicitFamily([{0}, {3}, {6}]), 1)
        assert res.scattered == ((6,), (3,), (0,))
        assert res.witness_nodes == (5, 3, 0)

    def test_st_on_path(self):
        g, gtd = path_gtd(7)
        res = check_pack_or_hit(g, gtd, STPaths({0}, {6}), 1)
        assert res.scattered == (tuple(range(7)),) and res.witness_nodes == (0,)

    def test_spider_children_order(self):
        g, gtd = spider_gtd(3, 2)
        fam = ExplicitFamily([{2}, {4}, {6}])
        assert check_pack_or_hit(g, gtd, fam, 1).witness_nodes == (2, 4, 6)
        res = check_pack_or_hit(g, gtd, fam, 3)
        assert res.scattered == ((2,),) and res.witness_nodes == (2,)

    def test_unguarded_member_is_contract_error(self):
        g = path_graph(7)
        nodes = [GTDNode(i, None if i == 0 else i - 1, frozenset({i, i + 1}), frozenset({i})) for i in range(6)]
        gtd = GuardedTreeDecomposition(tuple(nodes))
        with pytest.raises(ContractError, match="node 5"):
            pack_or_hit(g, gtd, ExplicitFamily([{6}]), 0)

    def test_rejects_bad_input(self, p3):
        with pytest.raises(InputError):
            pack_or_hit(p3, chain_gtd([{0, 1}]), ExplicitFamily([{0}]), 0)
        with pytest.raises(InputError):
            pack_or_hit(p3, chain_gtd([{0, 1, 2}]), ExplicitFamily([{0, 2}]), 0)
        with pytest.raises(InputError):
            pack_or_hit(p3, chain_gtd([{0, 1, 2}]), ExplicitFamily([{0}]), -1)
        with pytest.raises(InputError):
            ExplicitFamily([[]])

    @pytest.mark.parametrize("rows,cols", [(1, 6), (2, 4), (3, 3), (3, 5)])
    @pytest.mark.parametrize("d", [0, 1, 2])
    def test_grids(self, rows, cols, d):
        g, gtd = grid_gtd(rows, cols)
        s = {i * cols for i in range(rows)}
        t = {i * cols + cols - 1 for i in range(rows)}
        check_pack_or_hit(g, gtd, STPaths(s, t), d)
        for seed in range(3):
            check_pack_or_hit(g, gtd, random_connected_family(g, seed + 10 * rows + cols), d)

    def test_deep_chain(self):
        g, gtd = path_gtd(400)
        res = pack_or_hit(g, gtd, ExplicitFamily([{0}, {399}]), 2)
        assert len(res.scattered) == 2


class TestPackOrCover:
    def test_cover_on_path(self):
        g, gtd = path_gtd(7)
        out = check_pack_or_cover(g, gtd, STPaths({0}, {6}), 1, 2)
        assert out.kind == "cover" and out.cover == {0, 1}

    def test_pack_on_path(self):
        g, gtd = path_gtd(7)
        out = check_pack_or_cover(g, gtd, ExplicitFamily([{0}, {3}, {6}]), 1, 2)
        assert out.kind == "pack" and len(out.members) == 2

    def test_empty_family(self):
        g, gtd = path_gtd(4)
        out = pack_or_cover(g, gtd, ExplicitFamily([]), 1, 3)
        assert out.kind == "cover" and out.cover == frozenset()

    def test_k_must_be_positive(self):
        g, gtd = path_gtd(4)
        with pytest.raises(InputError):
            pack_or_cover(g, gtd, ExplicitFamily([]), 1, 0)

    @pytest.mark.parametrize("rows,cols", [(2, 5), (3, 4), (3, 6)])
    def test_grids(self, rows, cols):
        g, gtd = grid_gtd(rows, cols)
        fam = STPaths({0}, {g.n - 1})
        for d in (0, 1, 2):
            for k in (1, 2, 3):
                check_pack_or_cover(g, gtd, fam, d, k)

    def test_cover_hits(self):
        g, _ = path_gtd(7)
        assert cover_hits(g, STPaths({0}, {6}), {3}, 0)
        assert not cover_hits(g, ExplicitFamily([{0}, {6}]), {3}, 2)
        assert cover_hits(g, ExplicitFamily([{0}, {6}]), {3}, 3)


def test_disconnected_member_rejected():
    g = Graph(3, frozenset({(0, 1)}))
    with pytest.raises(InputError):
        pack_or_hit(g, chain_gtd([{0, 1, 2}]), ExplicitFamily([{0, 2}]), 0)
