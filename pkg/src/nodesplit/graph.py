"""Graph helpers shared by elimination and jointree construction."""

from __future__ import annotations

from itertools import combinations
from typing import Dict, Iterable, List, Sequence, Set

import networkx as nx

from .model import Network

Adjacency = Dict[int, Set[int]]


def moral_graph(net: Network, exclude: Iterable[int] = ()) -> Adjacency:
    """Undirected moral graph: families become cliques."""
    skip = set(exclude)
    adj: Adjacency = {v: set() for v in range(net.n) if v not in skip}
    for v in range(net.n):
        fam = [u for u in net.family(v) if u not in skip]
        for a, b in combinations(fam, 2):
            adj[a].add(b)
            adj[b].add(a)
    return adj


def scope_graph(scopes: Iterable[Sequence[int]]) -> Adjacency:
    """Interaction graph of a set of factor scopes."""
    adj: Adjacency = {}
    for scope in scopes:
        for v in scope:
            adj.setdefault(v, set())
        for a, b in combinations(scope, 2):
            adj[a].add(b)
            adj[b].add(a)
    return adj


def _fill(adj: Adjacency, v: int) -> int:
    ns = adj[v]
    return sum(1 for a, b in combinations(ns, 2) if b not in adj[a])


def min_fill_order(adj: Adjacency) -> List[int]:
    """Greedy min-fill elimination order; ties go to the lowest id."""
    adj = {v: set(ns) for v, ns in adj.items()}
    score = {v: _fill(adj, v) for v in adj}
    order = []
    while adj:
        v = min(adj, key=lambda u: (score[u], u))
        ns = adj.pop(v)
        del score[v]
        for a in ns:
            adj[a].discard(v)
        for a, b in combinations(ns, 2):
            adj[a].add(b)
            adj[b].add(a)
        order.append(v)
        dirty = set(ns)
        for a in ns:
            dirty |= adj[a]
        for u in dirty:
            score[u] = _fill(adj, u)
    return order


def elimination_cliques(adj: Adjacency, order: Sequence[int]) -> List[frozenset]:
    """Clique formed by each variable and its neighbours when it is eliminated."""
    adj = {v: set(ns) for v, ns in adj.items()}
    if set(order) != set(adj) or len(order) != len(adj):
        raise ValueError("order must be a permutation of the graph's vertices")
    cliques = []
    for v in order:
        ns = adj.pop(v)
        cliques.append(frozenset(ns | {v}))
        for a in ns:
            adj[a].discard(v)
        for a, b in combinations(ns, 2):
            adj[a].add(b)
            adj[b].add(a)
    return cliques


def induced_width(adj: Adjacency, order: Sequence[int]) -> int:
    """Largest elimination clique size minus one."""
    return max((len(c) for c in elimination_cliques(adj, order)), default=1) - 1


def skeleton(net: Network) -> nx.Graph:
    g = nx.Graph()
    g.add_nodes_from(range(net.n))
    for v, ps in enumerate(net.parents):
        g.add_edges_from((u, v) for u in ps)
    return g


def is_singly_connected(net: Network) -> bool:
    """True when the undirected skeleton has no cycle (a polytree forest)."""
    return nx.is_forest(skeleton(net))


def cycle_rank(net: Network) -> int:
    """Number of independent undirected cycles in the skeleton."""
    g = skeleton(net)
    return g.number_of_edges() - g.number_of_nodes() + nx.number_connected_components(g)
