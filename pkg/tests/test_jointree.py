import itertools
import math

import pytest

import oracle
from networks import A, B, C, five_node, four_cycle, two_node
from nodesplit.graph import induced_width, min_fill_order, moral_graph
from nodesplit.jointree import Jointree, build_jointree, max_propagate, propagate, removal_score
from nodesplit.model import Network
from nodesplit.splitting import SplitNetwork, full_split


def chain3():
    return Network.from_tables([2] * 3, [[], [0], [1]], [[0.4, 0.6], [0.3, 0.7, 0.9, 0.1], [0.5, 0.5, 0.2, 0.8]])


def test_chain_clusters():
    jt = build_jointree(chain3())
    assert sorted(map(sorted, jt.clusters)) == [[0, 1], [1, 2]]
    assert [set(s) for s in jt.separators] == [{1}]
    assert jt.violations(chain3()) == []


def test_two_node_single_cluster():
    jt = build_jointree(two_node())
    assert [set(c) for c in jt.clusters] == [{A, B}] and not jt.edges


def exhaustive_treewidth(net):
    adj = moral_graph(net)
    return min(induced_width(adj, order) for order in itertools.permutations(range(net.n)))


def test_five_node_min_fill_is_optimal():
    net = five_node()
    jt = build_jointree(net)
    assert jt.max_cluster_size == exhaustive_treewidth(net) + 1
    assert jt.violations(net) == []


def test_removal_score_formula():
    cards = [2, 2, 2]
    jt = Jointree(clusters=[frozenset({0, 1, 2})], edges=[], separators=[], assignment={})
    net = Network.from_tables(cards, [[], [0], [0, 1]], [[0.5] * 2, [0.5] * 4, [0.5] * 8])
    assert removal_score(jt, net, 0) == 4
    jt = Jointree(
        clusters=[frozenset({0, 1}), frozenset({0, 2})],
        edges=[(0, 1)],
        separators=[frozenset({0})],
        assignment={},
    )
    assert removal_score(jt, net, 0) == 5
    with pytest.raises(ValueError):
        removal_score(jt, Network.from_tables([2] * 4, [[]] * 4, [[0.5, 0.5]] * 4), 3)


def test_violations_detects_broken_trees():
    net = chain3()
    broken = Jointree(
        clusters=[frozenset({0, 1}), frozenset({2}), frozenset({1, 2})],
        edges=[(0, 1), (1, 2)],
        separators=[frozenset(), frozenset({2})],
        assignment={0: 0, 1: 0, 2: 2},
    )
    assert broken.violations(net)


def test_propagation_two_node():
    jt = build_jointree(two_node())
    value, x = max_propagate(jt, two_node())
    assert math.isclose(value, math.log(0.56)) and x == {A: 1, B: 0}
    assert math.isclose(max_propagate(jt, two_node(), {A: 0})[0], math.log(0.18))
    assert math.isclose(propagate(jt, two_node(), {B: 0}, "sum")[0], math.log(0.58))


@pytest.mark.parametrize("seed", range(40))
def test_propagation_matches_enumeration(seed):
    net, e, _ = oracle.random_case(seed, (1, 10), cards=(2, 3), zero_prob=0.2 if seed % 5 == 0 else 0.0)
    jt = build_jointree(net)
    assert jt.violations(net) == []
    value, x = max_propagate(jt, net, e)
    best, _ = oracle.mpe(net, e)
    assert oracle.close(value, best)
    if best > -math.inf:
        assert oracle.close(oracle.log_prob(net, x), best)
        assert all(x[v] == val for v, val in e.items())
    assert oracle.close(propagate(jt, net, e, "sum")[0], oracle.pe(net, e))


def test_full_evidence_fast_path():
    net = four_cycle()
    x = {0: 1, 1: 0, 2: 1, 3: 1}
    value, got = max_propagate(build_jointree(net), net, x)
    assert oracle.close(value, oracle.log_prob(net, x)) and got == x


@pytest.mark.parametrize("seed", range(25))
def test_split_by_removal_score_never_widens_clusters(seed):
    # rebuilding along the previous order with the new clones eliminated first
    # keeps every cluster inside an old one, so the widest cluster cannot grow
    net = oracle.random_case(seed, (6, 10), max_parents=3)[0]
    sn = SplitNetwork.of(net)
    order = min_fill_order(moral_graph(sn.net))
    jt = build_jointree(sn.net, order)
    for _ in range(3):
        candidates = [v for v in range(net.n) if sn.net.children[v]]
        if not candidates:
            break
        best = max(candidates, key=lambda v: (removal_score(jt, sn.net, v), -v))
        n_before = sn.net.n
        sn = full_split(sn, best)
        order = list(range(n_before, sn.net.n)) + order
        new = build_jointree(sn.net, order)
        assert new.violations(sn.net) == []
        assert new.max_cluster_size <= jt.max_cluster_size
        jt = new


def test_total_table_size_can_grow_after_full_split():
    # X -> Y1, X -> Y2, P -> Y1, P -> Y2: the clones' families become separate
    # clusters and X stays behind as a singleton
    x, p, y1, y2 = range(4)
    net = Network.from_tables(
        [2] * 4, [[], [], [x, p], [x, p]], [[0.5] * 2, [0.5] * 2, [0.5] * 8, [0.5] * 8]
    )
    jt = build_jointree(net)
    assert jt.total_size(net.cards) == 8 + 8 + 4
    assert removal_score(jt, net, x) == 10
    sn = full_split(SplitNetwork.of(net), x)
    new = build_jointree(sn.net)
    assert new.total_size(sn.net.cards) == 8 + 8 + 2 + 2 + 1
    assert new.max_cluster_size == jt.max_cluster_size


def test_evidence_on_clusters_does_not_depend_on_root():
    net = four_cycle()
    jt = build_jointree(net)
    for e in ({C: 1}, {0: 0, 3: 1}, {}):
        assert oracle.close(max_propagate(jt, net, e)[0], oracle.mpe(net, e)[0])
