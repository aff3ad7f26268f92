"""Small hand-built networks shared by the tests."""

import numpy as np

from nodesplit.model import Network

A, B, C, D, E = range(5)


def two_node():
    """A -> B, binary, theta_a1 = .2, theta_b1|a1 = .1, theta_b1|a2 = .7."""
    return Network.from_tables(
        [2, 2], [[], [A]], [[0.2, 0.8], [0.1, 0.9, 0.7, 0.3]], names=["A", "B"]
    )


TWO_NODE_UAI = """BAYES
2
2 2
2
1 0
2 0 1

2
0.2 0.8

4
0.1 0.9
0.7 0.3
"""


def five_node(seed=11):
    """A->B, A->C, A->D, B->C, C->D, C->E, D->E with D ternary.

    CPT families: A | B|A | C|A,B | D|A,C | E|C,D.
    """
    rng = np.random.Generator(np.random.PCG64(seed))
    cards = [2, 2, 2, 3, 2]
    parents = [[], [A], [A, B], [A, C], [C, D]]
    tables = []
    for v, ps in enumerate(parents):
        rows = int(np.prod([cards[u] for u in ps])) if ps else 1
        tables.append(rng.dirichlet(np.ones(cards[v]), size=rows).reshape(-1))
    return Network.from_tables(cards, parents, tables, names="ABCDE")


def five_node_partition(bucket, var):
    """Mini-buckets that eliminate A twice (D's CPT alone second) and C twice
    (the factors mentioning D first)."""
    idx = list(range(len(bucket)))
    if var == A:
        pick = [k for k in idx if D not in bucket[k].scope]
    elif var == C:
        pick = [k for k in idx if D in bucket[k].scope]
    else:
        pick = idx
    return pick or idx


def four_cycle():
    """A->B->D, A->C->D, all binary."""
    tables = [[0.3, 0.7], [0.9, 0.1, 0.2, 0.8], [0.6, 0.4, 0.25, 0.75],
              [0.1, 0.9, 0.5, 0.5, 0.35, 0.65, 0.8, 0.2]]
    return Network.from_tables([2] * 4, [[], [0], [0], [1, 2]], tables, names="ABCD")


def grid(rows, cols, seed=0):
    """Binary grid: each cell's parents are its upper and left neighbours."""
    rng = np.random.Generator(np.random.PCG64(seed))
    n = rows * cols
    parents = []
    for r in range(rows):
        for c in range(cols):
            ps = []
            if r:
                ps.append((r - 1) * cols + c)
            if c:
                ps.append(r * cols + c - 1)
            parents.append(ps)
    tables = [rng.dirichlet([1, 1], size=2 ** len(ps)).reshape(-1) for ps in parents]
    return Network.from_tables([2] * n, parents, tables)
