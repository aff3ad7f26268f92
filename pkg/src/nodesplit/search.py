"""Depth-first branch-and-bound for MPE over a split network's bound.

At each node the bound is ``beta * MPE_p(N', z, z_clones)``.  In the reduced
space only split variables are branched on: once they are all assigned the
bound equals ``MPE_p(N, z)`` exactly, so the node is a leaf.  Without the
bound, the reduced search enumerates split-variable instantiations and
evaluates each exactly, which is cutset conditioning when the split network
is a polytree.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Mapping, Optional, Sequence

from .model import Instantiation, Network, check_instantiation
from .splitting import BoundEvaluator, SplitNetwork

__all__ = ["SearchOptions", "SearchResult", "split_bnb", "branch_order", "reduced_space_size"]


@dataclass
class SearchOptions:
    space: str = "reduced"
    use_bound: bool = True
    variable_order: Optional[Sequence[int]] = None
    seed_lower_bound: float = -math.inf
    engine: str = "jointree"
    # jointree elimination order for the split network (min-fill when None)
    engine_order: Optional[Sequence[int]] = None
    max_nodes: Optional[int] = None
    # called once per node with (depth, branched assignment, bound or None, incumbent)
    log: Optional[Callable[[int, Dict[int, int], Optional[float], float], None]] = None

    def __post_init__(self):
        if self.space not in ("full", "reduced"):
            raise ValueError(f"space must be 'full' or 'reduced', not {self.space!r}")


@dataclass
class SearchResult:
    mpe_log: float
    argmax: Instantiation
    nodes_visited: int
    bounds_evaluated: int
    # False when max_nodes stopped the search before it finished
    finished: bool = True
    order: List[int] = field(default_factory=list)


class _Budget(Exception):
    pass


def branch_order(sn: SplitNetwork, e: Mapping[int, int], space: str) -> List[int]:
    """Split variables by descending clone count (ties by id), then, in the
    full space, the remaining unobserved variables by id."""
    counts = sn.clone_counts()
    split = sorted((v for v in counts if v not in e), key=lambda v: (-counts[v], v))
    if space == "reduced":
        return split
    rest = [v for v in range(sn.base.n) if v not in e and v not in counts]
    return split + rest


def reduced_space_size(sn: SplitNetwork, order: Sequence[int]) -> int:
    """Nodes in the complete search tree over ``order`` (root included)."""
    total, level = 1, 1
    for v in order:
        level *= sn.base.cards[v]
        total += level
    return total


def _check_order(sn: SplitNetwork, e, order, space) -> List[int]:
    order = [int(v) for v in order]
    split = {v for v in sn.split_variables if v not in e}
    if len(set(order)) != len(order) or any(v in e for v in order):
        raise ValueError("variable order repeats a variable or includes an observed one")
    if space == "reduced" and set(order) != split:
        raise ValueError("reduced-space order must list exactly the unobserved split variables")
    if space == "full":
        free = {v for v in range(sn.base.n) if v not in e}
        if set(order) != free:
            raise ValueError("full-space order must list every unobserved variable")
        if set(order[: len(split)]) != split:
            raise ValueError("full-space order must put the split variables first")
    return order


def split_bnb(
    base: Network,
    sn: SplitNetwork,
    e: Mapping[int, int] | None = None,
    opts: SearchOptions | None = None,
) -> SearchResult:
    """Exact MPE of ``base`` given ``e`` by branch-and-bound on ``sn``'s bound.

    A child is expanded only when its bound strictly exceeds the incumbent.
    Inconsistent evidence yields ``mpe_log = -inf`` and an empty ``argmax``.
    """
    opts = opts or SearchOptions()
    if sn.base is not base and sn.base.n != base.n:
        raise ValueError("split network was not derived from this base network")
    e = check_instantiation(base, e or {})
    order = (
        branch_order(sn, e, opts.space)
        if opts.variable_order is None
        else _check_order(sn, e, opts.variable_order, opts.space)
    )
    evaluate = BoundEvaluator(sn, opts.engine, opts.engine_order)
    cards = base.cards
    z = dict(e)
    best = {"q": opts.seed_lower_bound, "x": {}}
    stats = {"nodes": 0, "bounds": 0}

    def visit(depth: int) -> None:
        if opts.max_nodes is not None and stats["nodes"] >= opts.max_nodes:
            raise _Budget
        stats["nodes"] += 1
        complete = depth == len(order)
        q = None
        if opts.use_bound or complete:
            q, x = evaluate(z, argmax=complete)
            stats["bounds"] += 1
        if opts.log is not None:
            opts.log(depth, {v: z[v] for v in order[:depth]}, q, best["q"])
        if q is not None and not q > best["q"]:
            return
        if complete:
            best["q"], best["x"] = q, x
            return
        var = order[depth]
        for val in range(cards[var]):
            z[var] = val
            visit(depth + 1)
        del z[var]

    finished = True
    try:
        visit(0)
    except _Budget:
        finished = False
    return SearchResult(best["q"], best["x"], stats["nodes"], stats["bounds"], finished, order)


def format_log_line(depth: int, z: Mapping[int, int], bound: Optional[float], incumbent: float) -> str:
    assignment = ",".join(f"{v}={z[v]}" for v in sorted(z))
    b = "-" if bound is None else repr(bound)
    return f"{depth}\t{assignment}\t{b}\t{incumbent!r}"
