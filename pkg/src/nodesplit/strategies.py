"""Choosing which nodes to split.

``mb`` replays greedy mini-bucket elimination, which keeps the number of
clones low.  ``jt`` repeatedly fully splits the variable whose removal shrinks
the jointree tables most, which keeps the number of split variables low.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Mapping, Optional, Sequence, Tuple

from .elimination import default_order
from .graph import cycle_rank
from .jointree import build_jointree, removal_score
from .model import Network
from .splitting import SplitNetwork, full_split, split_mbe

__all__ = [
    "StrategyConfig",
    "mb_strategy",
    "jt_strategy",
    "apply_strategy",
    "loop_cutset",
    "cutset_split",
]


@dataclass(frozen=True)
class StrategyConfig:
    kind: str
    limit: int
    order: Optional[Tuple[int, ...]] = None

    def __post_init__(self):
        if self.kind not in ("mb", "jt"):
            raise ValueError(f"unknown strategy {self.kind!r}; expected 'mb' or 'jt'")
        if self.limit < 1:
            raise ValueError("limit must be at least 1")


def mb_strategy(net: Network, e: Mapping[int, int] | None, cfg: StrategyConfig):
    """Split network mirroring greedy mini-buckets with ``ibound = cfg.limit``.

    Returns ``(split_network, order_prime)``; exact elimination along
    ``order_prime`` never forms a factor wider than the limit (or than the
    widest CPT, if that is wider).
    """
    order = list(cfg.order) if cfg.order is not None else default_order(net, e)
    return split_mbe(net, e or {}, order, cfg.limit)


def jt_strategy(net: Network, cfg: StrategyConfig) -> SplitNetwork:
    """Fully split variables until the min-fill jointree's clusters fit ``cfg.limit``."""
    widest = max(len(net.family(v)) for v in range(net.n))
    if cfg.limit < widest:
        raise ValueError(
            f"limit {cfg.limit} is below the largest family size {widest}; clusters cannot shrink past families"
        )
    sn = SplitNetwork.of(net)
    while True:
        jt = build_jointree(sn.net)
        if jt.max_cluster_size <= cfg.limit:
            return sn
        # clones and already-split variables are never candidates
        candidates = [v for v in range(net.n) if sn.net.children[v]]
        best = max(candidates, key=lambda v: (removal_score(jt, sn.net, v), -v))
        sn = full_split(sn, best)


def apply_strategy(net: Network, e: Mapping[int, int] | None, cfg: StrategyConfig):
    """Run either strategy; returns ``(split_network, order_prime or None)``."""
    if cfg.kind == "mb":
        return mb_strategy(net, e, cfg)
    return jt_strategy(net, cfg), None


def loop_cutset(net: Network) -> List[int]:
    """A loop cutset found greedily: fully splitting it leaves a polytree.

    Each step fully splits the variable that removes the most independent
    undirected cycles (ties to the lowest id).
    """
    sn = SplitNetwork.of(net)
    cutset = []
    while cycle_rank(sn.net) > 0:
        candidates = [v for v in range(net.n) if sn.net.children[v]]
        best = min(candidates, key=lambda v: (cycle_rank(full_split(sn, v).net), v))
        sn = full_split(sn, best)
        cutset.append(best)
    return sorted(cutset)


def cutset_split(net: Network, cutset: Sequence[int] | None = None) -> SplitNetwork:
    sn = SplitNetwork.of(net)
    for v in loop_cutset(net) if cutset is None else cutset:
        sn = full_split(sn, v)
    return sn
