import math

import pytest

import oracle
from networks import A, B, C, D, E, five_node, five_node_partition, four_cycle, grid, two_node
from nodesplit.elimination import network_factors, ve
from nodesplit.graph import is_singly_connected
from nodesplit.jointree import build_jointree
from nodesplit.splitting import mpe_bound, split_mbe
from nodesplit.strategies import (
    StrategyConfig,
    apply_strategy,
    cutset_split,
    jt_strategy,
    loop_cutset,
    mb_strategy,
)


def test_config_validation():
    with pytest.raises(ValueError):
        StrategyConfig("xx", 3)
    with pytest.raises(ValueError):
        StrategyConfig("mb", 0)


def test_mb_two_node():
    sn, order_prime = mb_strategy(two_node(), {}, StrategyConfig("mb", 1, (A, B)))
    assert sn.split_variables == [A] and sn.n_clones == 1
    sn, _ = mb_strategy(two_node(), {}, StrategyConfig("mb", 2))
    assert sn.n_clones == 0


def test_mb_five_node_partition_matches_custom_run():
    sn, _ = split_mbe(five_node(), {}, [A, B, C, D, E], 3, partition=five_node_partition)
    assert sn.split_variables == [A, C] and sn.n_clones == 2


def test_jt_already_within_limit():
    assert jt_strategy(five_node(), StrategyConfig("jt", 10)).n_clones == 0


def test_jt_limit_below_family_size():
    with pytest.raises(ValueError, match="family"):
        jt_strategy(two_node(), StrategyConfig("jt", 1))
    with pytest.raises(ValueError):
        jt_strategy(four_cycle(), StrategyConfig("jt", 2))


def test_jt_four_cycle_needs_no_split_at_family_size():
    sn = jt_strategy(four_cycle(), StrategyConfig("jt", 3))
    assert sn.n_clones == 0


def test_jt_grid_splits_centre_once():
    net = grid(3, 3)
    assert build_jointree(net).max_cluster_size == 4
    sn = jt_strategy(net, StrategyConfig("jt", 3))
    assert sn.split_variables == [4] and sn.n_clones == 2
    assert build_jointree(sn.net).max_cluster_size <= 3


@pytest.mark.parametrize("seed", range(30))
def test_strategies_meet_limit_and_bound(seed):
    net, e, _ = oracle.random_case(seed, (4, 11), cards=(2, 3))
    best, _ = oracle.mpe(net, e)
    widest = max(len(net.family(v)) for v in range(net.n))
    for limit in (1, 2, 3, 4):
        sn, order_prime = mb_strategy(net, e, StrategyConfig("mb", limit))
        factors, origins = network_factors(sn.net, e)
        _, trace, _ = ve(factors, order_prime, "max", origins)
        assert trace.max_scope_size() <= max(limit, widest)
        assert mpe_bound(sn, e) >= best - 1e-9
        if limit < widest:
            continue
        sn = jt_strategy(net, StrategyConfig("jt", limit))
        assert build_jointree(sn.net).max_cluster_size <= limit
        assert all(len(c.children) == 1 for c in sn.clones.values())
        assert mpe_bound(sn, e) >= best - 1e-9


@pytest.mark.parametrize("seed", range(10))
def test_strategies_agree_at_variable_count(seed):
    net, e, _ = oracle.random_case(seed, (3, 9))
    results = [apply_strategy(net, e, StrategyConfig(kind, net.n))[0] for kind in ("mb", "jt")]
    assert all(sn.n_clones == 0 for sn in results)
    assert oracle.close(mpe_bound(results[0], e), mpe_bound(results[1], e))


def test_apply_strategy_returns_order_only_for_mb():
    assert apply_strategy(two_node(), {}, StrategyConfig("mb", 1))[1] is not None
    assert apply_strategy(two_node(), {}, StrategyConfig("jt", 2))[1] is None


@pytest.mark.parametrize("seed", range(15))
def test_loop_cutset_yields_polytree(seed):
    net = oracle.random_case(seed, (5, 12), max_parents=3)[0]
    cutset = loop_cutset(net)
    sn = cutset_split(net, cutset)
    assert is_singly_connected(sn.net)
    assert sorted(sn.split_variables) == cutset
    if is_singly_connected(net):
        assert cutset == []


def test_grid_cutset():
    net = grid(3, 3)
    cutset = loop_cutset(net)
    assert cutset and is_singly_connected(cutset_split(net, cutset).net)
    assert math.isfinite(mpe_bound(cutset_split(net)))
