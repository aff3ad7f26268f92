"""Jointrees: construction, table-size accounting, and max/sum propagation."""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass
from typing import Dict, FrozenSet, List, Mapping, Sequence, Tuple

import networkx as nx
import numpy as np
from scipy.special import logsumexp

from .graph import elimination_cliques, min_fill_order, moral_graph
from .model import Instantiation, Network

__all__ = [
    "Jointree",
    "build_jointree",
    "removal_score",
    "Propagator",
    "propagate",
    "max_propagate",
]


@dataclass(frozen=True)
class Jointree:
    clusters: Tuple[FrozenSet[int], ...]
    edges: Tuple[Tuple[int, int], ...]
    separators: Tuple[FrozenSet[int], ...]
    assignment: Mapping[int, int]

    @property
    def max_cluster_size(self) -> int:
        return max((len(c) for c in self.clusters), default=0)

    @property
    def width(self) -> int:
        return self.max_cluster_size - 1

    def total_size(self, cards: Sequence[int]) -> int:
        """Entries across all cluster and separator tables."""
        tables = list(self.clusters) + list(self.separators)
        return sum(math.prod(cards[v] for v in t) for t in tables)

    def violations(self, net: Network) -> List[str]:
        """Structural problems; empty for a valid jointree of ``net``."""
        problems = []
        g = nx.Graph()
        g.add_nodes_from(range(len(self.clusters)))
        g.add_edges_from(self.edges)
        if self.clusters and not nx.is_tree(g):
            problems.append("edges do not form a spanning tree")
        for (a, b), sep in zip(self.edges, self.separators):
            if sep != self.clusters[a] & self.clusters[b]:
                problems.append(f"separator of edge {a}-{b} is not the cluster intersection")
        for v in range(net.n):
            home = self.assignment.get(v)
            if home is None or not set(net.family(v)) <= self.clusters[home]:
                problems.append(f"family of {net.name(v)!r} is not covered")
            holding = [k for k, c in enumerate(self.clusters) if v in c]
            if holding and not nx.is_connected(g.subgraph(holding)):
                problems.append(f"clusters holding {net.name(v)!r} are not connected")
        return problems


def build_jointree(net: Network, order: Sequence[int] | None = None) -> Jointree:
    """Jointree from the maximal cliques of the moral graph triangulated along ``order``.

    ``order`` defaults to min-fill.  Clusters are joined by a maximum-weight
    spanning tree on separator sizes.
    """
    adj = moral_graph(net)
    if order is None:
        order = min_fill_order(adj)
    cliques = elimination_cliques(adj, order)
    clusters: List[FrozenSet[int]] = []
    for c in sorted(cliques, key=len, reverse=True):
        if not any(c <= d for d in clusters):
            clusters.append(c)
    clusters.sort(key=lambda c: order.index(min(c, key=order.index)))

    holding: Dict[int, List[int]] = {}
    for k, c in enumerate(clusters):
        for v in c:
            holding.setdefault(v, []).append(k)
    g = nx.Graph()
    g.add_nodes_from(range(len(clusters)))
    for ks in holding.values():
        for i, a in enumerate(ks):
            for b in ks[i + 1:]:
                if not g.has_edge(a, b):
                    g.add_edge(a, b, weight=len(clusters[a] & clusters[b]))
    for k in range(1, len(clusters)):
        if not g.has_edge(0, k):
            g.add_edge(0, k, weight=0)
    tree = nx.maximum_spanning_tree(g)
    edges = tuple(sorted((min(a, b), max(a, b)) for a, b in tree.edges()))
    separators = tuple(clusters[a] & clusters[b] for a, b in edges)
    assignment = {}
    for v in range(net.n):
        fam = set(net.family(v))
        assignment[v] = next(k for k in holding[v] if fam <= clusters[k])
    return Jointree(tuple(clusters), edges, separators, assignment)


def removal_score(jt: Jointree, net: Network, var: int) -> float:
    """Table entries saved by removing ``var`` from every cluster and separator."""
    tables = [t for t in list(jt.clusters) + list(jt.separators) if var in t]
    if not any(var in c for c in jt.clusters):
        raise ValueError(f"{net.name(var)!r} does not appear in the jointree")
    score = 0
    for t in tables:
        rest = math.prod(net.cards[u] for u in t if u != var)
        score += rest * net.cards[var] - rest
    return float(score)


class Propagator:
    """A jointree compiled for repeated max- or sum-product queries on one network.

    Cluster potentials (products of the assigned CPTs) are built once;
    each query slices them at the evidence and runs one collect pass toward
    cluster 0, plus a decode pass when a maximizer is requested.
    """

    def __init__(self, jt: Jointree, net: Network):
        self.jt, self.net = jt, net
        k = len(jt.clusters)
        self.vars = [tuple(sorted(c)) for c in jt.clusters]
        nbrs: Dict[int, List[int]] = {c: [] for c in range(k)}
        for a, b in jt.edges:
            nbrs[a].append(b)
            nbrs[b].append(a)
        self.parent = {0: None} if k else {}
        self.preorder = []
        queue = deque([0] if k else [])
        while queue:
            c = queue.popleft()
            self.preorder.append(c)
            for d in nbrs[c]:
                if d not in self.parent:
                    self.parent[d] = c
                    queue.append(d)
        self.children = {c: [d for d in nbrs[c] if self.parent.get(d) == c] for c in range(k)}
        self.potentials = []
        for c in range(k):
            vs = self.vars[c]
            table = np.zeros(tuple(net.cards[v] for v in vs))
            for v, home in jt.assignment.items():
                if home == c:
                    cpt = net.cpts[v]
                    present = [u for u in vs if u in cpt.scope]
                    t = np.transpose(cpt.table, [cpt.scope.index(u) for u in present])
                    table = table + t.reshape([net.cards[u] if u in cpt.scope else 1 for u in vs])
            self.potentials.append(table)
        # for each non-root cluster: axes summed/maxed away, separator positions in the parent
        self.out_axes = {}
        self.sep_in_parent = {}
        for c in self.preorder[1:]:
            p = self.parent[c]
            sep = set(self.vars[c]) & set(self.vars[p])
            self.out_axes[c] = tuple(i for i, v in enumerate(self.vars[c]) if v not in sep)
            self.sep_in_parent[c] = [v in sep for v in self.vars[p]]

    def query(self, evidence: Mapping[int, int] | None = None, op: str = "max", argmax: bool = False):
        """Return ``(log_value, maximizer or None)``."""
        evidence = evidence or {}
        if op not in ("max", "sum"):
            raise ValueError(f"unknown operator {op!r}")
        net = self.net
        if len(evidence) == net.n:
            return net.log_prob(evidence), (dict(evidence) if argmax else None)
        reduce = np.max if op == "max" else logsumexp
        totals: Dict[int, np.ndarray] = {}
        inbox: Dict[int, list] = {c: [] for c in self.preorder}
        for c in reversed(self.preorder):
            vs = self.vars[c]
            index = tuple(
                slice(evidence[v], evidence[v] + 1) if v in evidence else slice(None) for v in vs
            )
            total = self.potentials[c][index]
            for msg in inbox[c]:
                total = total + msg
            totals[c] = total
            p = self.parent[c]
            if p is None:
                continue
            msg = reduce(total, axis=self.out_axes[c]) if self.out_axes[c] else total
            shape = [
                (1 if v in evidence else net.cards[v]) if keep else 1
                for v, keep in zip(self.vars[p], self.sep_in_parent[c])
            ]
            inbox[p].append(np.reshape(msg, shape))
        if not self.preorder:
            return 0.0, ({} if argmax else None)
        value = float(reduce(totals[0], axis=None))
        if not argmax or op != "max":
            return value, None
        x: Instantiation = dict(evidence)
        for c in self.preorder:
            vs = self.vars[c]
            index = tuple(
                0 if v in evidence else (x[v] if v in x else slice(None)) for v in vs
            )
            sub = totals[c][index]
            free = [v for v in vs if v not in x]
            if free:
                pos = np.unravel_index(int(np.argmax(sub)), sub.shape)
                for v, val in zip(free, pos):
                    x[v] = int(val)
        return value, x


def propagate(jt: Jointree, net: Network, evidence: Mapping[int, int] | None = None, op: str = "max"):
    """One-shot query; returns ``(log_value, maximizer)`` (maximizer is ``None`` for ``op="sum"``)."""
    return Propagator(jt, net).query(evidence, op, argmax=(op == "max"))


def max_propagate(jt: Jointree, net: Network, evidence: Mapping[int, int] | None = None):
    return propagate(jt, net, evidence, "max")
