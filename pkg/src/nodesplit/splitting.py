"""Node splitting and the bounds it yields.

Splitting ``X`` according to some of its children adds a root clone with a
uniform prior that takes over those children.  With ``beta`` the product of
clone cardinalities, ``beta * Pr'(x, x_clones) == Pr(x)`` for every complete
instantiation ``x`` of the original network, so exact MPE (or evidence
probability) in the split network, scaled by ``beta``, bounds the original.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from types import MappingProxyType
from typing import Iterable, List, Mapping, Sequence, Tuple

import numpy as np

from .elimination import basis, default_order, mbe, network_factors, ve
from .factors import Factor
from .jointree import Propagator, build_jointree
from .model import Instantiation, ModelError, Network, Variable, check_instantiation

__all__ = [
    "Clone",
    "SplitNetwork",
    "split_node",
    "full_split",
    "extend_instantiation",
    "BoundEvaluator",
    "mpe_bound",
    "pe_bound",
    "split_mbe",
    "mapping_to_json",
    "mapping_from_json",
]


@dataclass(frozen=True)
class Clone:
    original: int
    children: Tuple[int, ...]


@dataclass(frozen=True)
class SplitNetwork:
    base: Network
    net: Network
    clones: Mapping[int, Clone]
    beta_log: float

    @classmethod
    def of(cls, net: Network) -> "SplitNetwork":
        """The trivial split: no clones, ``beta = 1``."""
        return cls(net, net, MappingProxyType({}), 0.0)

    def root(self, v: int) -> int:
        """The base-network variable that ``v`` is (a clone of)."""
        while v in self.clones:
            v = self.clones[v].original
        return v

    @property
    def split_variables(self) -> List[int]:
        return sorted({self.root(c) for c in self.clones})

    def clone_counts(self) -> dict:
        counts: dict = {}
        for c in self.clones:
            r = self.root(c)
            counts[r] = counts.get(r, 0) + 1
        return counts

    @property
    def n_clones(self) -> int:
        return len(self.clones)


def split_node(
    sn: SplitNetwork, var: int, children: Iterable[int], name: str | None = None
) -> SplitNetwork:
    """Split ``var`` in ``sn.net`` according to ``children``.

    The clone gets the next free id and a uniform prior; each inherited child
    keeps its CPT table, with ``var`` renamed to the clone in its scope.
    """
    net = sn.net
    kids = tuple(sorted(set(children)))
    if not kids:
        raise ValueError("cannot split according to an empty set of children")
    for z in kids:
        if z not in net.children[var]:
            raise ValueError(f"{net.name(z)!r} is not a child of {net.name(var)!r}")
    clone = net.n
    card = net.cards[var]
    if name is None:
        existing = sum(1 for c in sn.clones.values() if c.original == var)
        name = f"{net.name(var)}^{existing + 1}"
    variables = list(net.variables) + [Variable(clone, name, card)]
    parents = [list(p) for p in net.parents] + [[]]
    cpts = list(net.cpts) + [Factor((clone,), np.full(card, -math.log(card)))]
    for z in kids:
        parents[z] = [clone if u == var else u for u in parents[z]]
        cpts[z] = cpts[z].rename({var: clone})
    new = Network(variables, parents, cpts, validate=False)
    clones = dict(sn.clones)
    clones[clone] = Clone(var, kids)
    return SplitNetwork(sn.base, new, MappingProxyType(clones), sn.beta_log + math.log(card))


def full_split(sn: SplitNetwork, var: int) -> SplitNetwork:
    """Split ``var`` along every outgoing edge, one clone per child."""
    kids = sn.net.children[var]
    if not kids:
        raise ValueError(f"{sn.net.name(var)!r} has no children to split")
    base_name = sn.net.name(var)
    for z in kids:
        sn = split_node(sn, var, [z], name=f"{base_name}^{sn.net.name(z)}")
    return sn


def extend_instantiation(sn: SplitNetwork, x: Mapping[int, int]) -> Instantiation:
    """Assign every clone whose original is set in ``x`` the original's value."""
    out = {}
    for c in sn.clones:
        r = sn.root(c)
        if r in x:
            out[c] = x[r]
    return out


class BoundEvaluator:
    """Exact queries on ``sn.net`` for evidence over base variables.

    Evidence on a split variable is copied to all of its clones and the result
    is scaled by ``beta``.  With the jointree engine the tree is built once
    (min-fill unless ``order`` is given) and reused across queries.
    """

    def __init__(self, sn: SplitNetwork, engine: str = "jointree", order: Sequence[int] | None = None):
        if engine not in ("jointree", "ve"):
            raise ValueError(f"unknown engine {engine!r}")
        self.sn, self.engine = sn, engine
        self._propagator = Propagator(build_jointree(sn.net, order), sn.net) if engine == "jointree" else None

    def evidence(self, z: Mapping[int, int]) -> Instantiation:
        return {**z, **extend_instantiation(self.sn, z)}

    def __call__(self, z: Mapping[int, int], op: str = "max", argmax: bool = False):
        """``(log bound, maximizer over base variables or None)``."""
        ev = self.evidence(z)
        if self._propagator is not None:
            value, x = self._propagator.query(ev, op, argmax=argmax and op == "max")
        else:
            net = self.sn.net
            factors, origins = network_factors(net, ev)
            value, _, x = ve(factors, default_order(net, ev), op, origins, evidence=ev)
        if x is not None and argmax:
            x = {v: val for v, val in x.items() if v < self.sn.base.n}
        else:
            x = None
        return self.sn.beta_log + value, x


def mpe_bound(sn: SplitNetwork, e: Mapping[int, int] | None = None, engine: str = "jointree") -> float:
    """``log beta + log MPE_p(N', e, e_clones)``; never below the original MPE."""
    e = check_instantiation(sn.base, e or {})
    return BoundEvaluator(sn, engine)(e, "max")[0]


def pe_bound(sn: SplitNetwork, e: Mapping[int, int] | None = None, engine: str = "jointree") -> float:
    """``log beta + log Pr'(e, e_clones)``; never below the original ``log Pr(e)``."""
    e = check_instantiation(sn.base, e or {})
    return BoundEvaluator(sn, engine)(e, "sum")[0]


def split_mbe(
    net: Network,
    e: Mapping[int, int] | None = None,
    order: Sequence[int] | None = None,
    ibound: int = 1,
    op: str = "max",
    partition=None,
):
    """Split network and elimination order whose exact run mirrors a mini-bucket run.

    Replays the mini-bucket trace: an iteration whose basis contains its
    variable keeps the variable itself in the order; any other iteration splits
    the variable according to the basis and eliminates the new clone instead.
    Returns ``(split_network, order_prime)``.
    """
    e = check_instantiation(net, e or {})
    if order is None:
        order = default_order(net, e)
    factors, origins = network_factors(net, e)
    _, trace = mbe(factors, order, ibound, op, origins, partition)
    sn = SplitNetwork.of(net)
    order_prime = []
    for i, it in enumerate(trace.iterations):
        b = basis(trace, i)
        if it.variable in b:
            order_prime.append(it.variable)
        else:
            sn = split_node(sn, it.variable, b)
            order_prime.append(sn.net.n - 1)
    return sn, order_prime


def mapping_to_json(sn: SplitNetwork) -> str:
    doc = {
        "base_variables": sn.base.n,
        "beta_log": sn.beta_log,
        "clones": [
            {
                "id": c,
                "name": sn.net.name(c),
                "original": clone.original,
                "children": list(clone.children),
            }
            for c, clone in sorted(sn.clones.items())
        ],
    }
    return json.dumps(doc, indent=2) + "\n"


def mapping_from_json(text: str, base: Network, net: Network) -> SplitNetwork:
    """Rebuild a :class:`SplitNetwork` from a mapping file and both networks."""
    doc = json.loads(text)
    if doc["base_variables"] != base.n:
        raise ModelError("mapping file does not match the base network")
    clones = {}
    for entry in doc["clones"]:
        c = int(entry["id"])
        if not base.n <= c < net.n or net.parents[c]:
            raise ModelError(f"clone {c} is not a root added after the base variables")
        clones[c] = Clone(int(entry["original"]), tuple(entry["children"]))
    beta_log = sum(math.log(net.cards[c]) for c in clones)
    if abs(beta_log - float(doc["beta_log"])) > 1e-9:
        raise ModelError("beta_log in mapping file disagrees with clone cardinalities")
    return SplitNetwork(base, net, MappingProxyType(clones), beta_log)
