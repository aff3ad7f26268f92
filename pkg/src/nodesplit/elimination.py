"""Variable elimination, mini-bucket elimination and their execution traces.

Iterations are numbered from 0.  Factor ids index ``Trace.factors``: the
initial factors come first, each produced factor is appended when created.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Dict, List, Mapping, Optional, Sequence, Set, Tuple

from .factors import Factor, condition, max_out, product, sum_out
from .graph import min_fill_order, moral_graph
from .model import Instantiation, Network

__all__ = [
    "Iteration",
    "Trace",
    "network_factors",
    "default_order",
    "ve",
    "mbe",
    "greedy_partition",
    "subtrace",
    "basis",
    "trace_to_dot",
]


@dataclass(frozen=True)
class Iteration:
    variable: int
    inputs: Tuple[int, ...]
    output: int
    scope: Tuple[int, ...]


@dataclass
class Trace:
    factors: List[Factor]
    origins: Dict[int, int]
    iterations: List[Iteration] = field(default_factory=list)
    producer: Dict[int, int] = field(default_factory=dict)

    def __len__(self):
        return len(self.iterations)

    def edges(self) -> List[Tuple[int, int, int]]:
        """``(j, i, factor_id)`` for every produced factor ``f_j`` consumed at ``i``."""
        out = []
        for i, it in enumerate(self.iterations):
            for fid in it.inputs:
                if fid in self.producer:
                    out.append((self.producer[fid], i, fid))
        return out

    def max_scope_size(self) -> int:
        """Variable count of the largest product formed in any iteration."""
        return max((len(it.scope) for it in self.iterations), default=0)

    def eliminated(self) -> List[int]:
        return [it.variable for it in self.iterations]


def network_factors(net: Network, evidence: Mapping[int, int] | None = None):
    """CPTs of ``net`` with evidence incorporated, and their origin tags."""
    evidence = evidence or {}
    factors = [condition(cpt, evidence) for cpt in net.cpts]
    return factors, {v: v for v in range(net.n)}


def default_order(net: Network, evidence: Mapping[int, int] | None = None) -> List[int]:
    """Min-fill order over the unobserved variables of ``net``'s moral graph."""
    return min_fill_order(moral_graph(net, exclude=evidence or ()))


# selects, from the factor ids mentioning the variable (in creation order),
# those multiplied together in this iteration
Partition = Callable[[List[Factor], int], List[int]]


def greedy_partition(ibound: int) -> Partition:
    """First-fit mini-bucket: a maximal set whose union scope stays within ``ibound``.

    The earliest factor is always taken, so a factor wider than ``ibound``
    becomes a mini-bucket of its own.
    """

    def select(bucket: List[Factor], var: int) -> List[int]:
        chosen, scope = [0], set(bucket[0].scope)
        for k in range(1, len(bucket)):
            union = scope | set(bucket[k].scope)
            if len(union) <= ibound:
                chosen.append(k)
                scope = union
        return chosen

    return select


def _run(factors, order, op, origins, select):
    factors = list(factors)
    if op not in ("max", "sum"):
        raise ValueError(f"unknown operator {op!r}")
    if origins is None:
        origins = {k: k for k in range(len(factors))}
    trace = Trace(factors=factors, origins=dict(origins))
    missing = {v for f in factors for v in f.scope} - set(order)
    if missing:
        raise ValueError(f"elimination order misses variables {sorted(missing)}")
    active: Dict[int, None] = {}
    total = 0.0
    for fid, f in enumerate(factors):
        if f.scope:
            active[fid] = None
        else:
            total += f.value
    argmax_tables = []
    seen: Set[int] = set()
    for var in order:
        if var in seen:
            raise ValueError(f"variable {var} appears twice in the order")
        seen.add(var)
        while True:
            bucket = [fid for fid in active if var in trace.factors[fid].scope]
            if not bucket:
                break
            picked = [bucket[k] for k in select([trace.factors[b] for b in bucket], var)]
            prod = product(trace.factors[fid] for fid in picked)
            if op == "max":
                out, arg = max_out(prod, var, return_argmax=True)
                argmax_tables.append(arg)
            else:
                out = sum_out(prod, var)
            out_id = len(trace.factors)
            trace.factors.append(out)
            trace.producer[out_id] = len(trace.iterations)
            trace.iterations.append(Iteration(var, tuple(picked), out_id, prod.scope))
            for fid in picked:
                del active[fid]
            if out.scope:
                active[out_id] = None
            else:
                total += out.value
    return total, trace, argmax_tables


def ve(
    factors: Sequence[Factor],
    order: Sequence[int],
    op: str = "max",
    origins: Mapping[int, int] | None = None,
    evidence: Mapping[int, int] | None = None,
):
    """Exact variable elimination.

    Returns ``(log_value, trace, argmax)``.  With ``op="max"`` the value is the
    MPE probability and ``argmax`` a maximizing assignment of every eliminated
    variable (plus ``evidence``, if given); with ``op="sum"`` the value is the
    probability of evidence and ``argmax`` is ``None``.
    """
    total, trace, tables = _run(factors, order, op, origins, lambda bucket, var: range(len(bucket)))
    if op != "max":
        return total, trace, None
    x: Instantiation = dict(evidence or {})
    for it, arg in zip(reversed(trace.iterations), reversed(tables)):
        out = trace.factors[it.output]
        x[it.variable] = int(arg[tuple(x[v] for v in out.scope)])
    return total, trace, x


def mbe(
    factors: Sequence[Factor],
    order: Sequence[int],
    ibound: int,
    op: str = "max",
    origins: Mapping[int, int] | None = None,
    partition: Optional[Partition] = None,
):
    """Mini-bucket elimination; returns ``(log_bound, trace)``.

    Each bucket is split greedily (see :func:`greedy_partition`) unless a custom
    ``partition`` is supplied.  A variable may need several iterations.
    """
    if ibound < 1:
        raise ValueError("ibound must be at least 1")
    total, trace, _ = _run(factors, order, op, origins, partition or greedy_partition(ibound))
    return total, trace


def _check_index(trace: Trace, i: int) -> Iteration:
    if not 0 <= i < len(trace.iterations):
        raise IndexError(f"iteration {i} not in trace of length {len(trace.iterations)}")
    return trace.iterations[i]


def subtrace(trace: Trace, i: int) -> Tuple[Set[int], Set[Tuple[int, int]]]:
    """Iterations and edges reachable upward from ``i`` through factors mentioning its variable."""
    var = _check_index(trace, i).variable
    nodes, edges, stack = {i}, set(), [i]
    while stack:
        k = stack.pop()
        for fid in trace.iterations[k].inputs:
            j = trace.producer.get(fid)
            if j is None or var not in trace.factors[fid].scope:
                continue
            edges.add((j, k))
            if j not in nodes:
                nodes.add(j)
                stack.append(j)
    return nodes, edges


def basis(trace: Trace, i: int) -> Set[int]:
    """Variables whose CPTs feed the partial elimination performed at iteration ``i``."""
    var = _check_index(trace, i).variable
    nodes, _ = subtrace(trace, i)
    out = set()
    for j in nodes:
        for fid in trace.iterations[j].inputs:
            if fid not in trace.origins:
                continue
            owner = trace.origins[fid]
            # a conditioned CPT loses only observed variables, never an eliminated one
            if owner == var or var in trace.factors[fid].scope:
                out.add(owner)
    return out


def trace_to_dot(trace: Trace, names: Sequence[str] | None = None) -> str:
    label = (lambda v: names[v]) if names is not None else str
    lines = ["digraph trace {"]
    for i, it in enumerate(trace.iterations):
        lines.append(f'  n{i} [label="{i}: eliminate {label(it.variable)}"];')
    for j, i, fid in trace.edges():
        scope = ",".join(label(v) for v in trace.factors[fid].scope)
        lines.append(f'  n{j} -> n{i} [label="{{{scope}}}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"
