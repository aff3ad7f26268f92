"""Benchmark instances and the strategy/search sweep.

Coding networks: ``k`` uniform information bits, ``m`` parity bits (each the
XOR of ``parents_per_parity`` information bits) and one observed channel leaf
per transmitted bit.  A codeword is sampled, sent as BPSK (bit ``b`` becomes
``2b - 1``) through Gaussian noise, and each received value is folded into its
leaf's CPT as the normalized likelihood pair; the leaf is then observed in
state 0.

All randomness comes from numpy's PCG64 generator seeded with the instance seed.
"""

from __future__ import annotations

import csv
import io
import logging
import math
import time
from dataclasses import dataclass, field
from typing import Iterable, List, Mapping, Optional, Sequence, TextIO, Tuple

import numpy as np

from .model import Instantiation, Network
from .search import SearchOptions, split_bnb
from .splitting import BoundEvaluator
from .strategies import StrategyConfig, apply_strategy

log = logging.getLogger(__name__)

__all__ = [
    "CodingSpec",
    "BenchInstance",
    "BenchRecord",
    "BenchSummary",
    "CSV_HEADER",
    "gen_coding_network",
    "coding_ensemble",
    "random_network",
    "run_bench",
]

CSV_HEADER = (
    "instance,sigma,seed,heuristic,limit,splits,clones,beta_log,bound_log,mpe_log,space,nodes,time_ms"
).split(",")


@dataclass(frozen=True)
class CodingSpec:
    k: int = 16
    m: int = 24
    parents_per_parity: int = 4
    sigma: float = 0.5
    seed: int = 0

    def __post_init__(self):
        if self.k < 1 or self.m < 1:
            raise ValueError("need at least one information bit and one parity bit")
        if not self.sigma > 0:
            raise ValueError("sigma must be positive")
        if not 1 <= self.parents_per_parity <= self.k:
            raise ValueError("parents_per_parity must lie in 1..k")

    @property
    def name(self) -> str:
        return f"code-k{self.k}-m{self.m}-p{self.parents_per_parity}-s{self.sigma:g}-r{self.seed}"


def _rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(seed))


def gen_coding_network(spec: CodingSpec) -> Tuple[Network, Instantiation]:
    rng = _rng(spec.seed)
    k, m, p = spec.k, spec.m, spec.parents_per_parity
    checks = [sorted(int(u) for u in rng.choice(k, size=p, replace=False)) for _ in range(m)]
    info = rng.integers(0, 2, size=k)
    parity = [int(np.bitwise_xor.reduce(info[c])) for c in checks]
    bits = [int(b) for b in info] + parity
    received = np.array(bits) * 2.0 - 1.0 + spec.sigma * rng.standard_normal(k + m)

    n = 2 * (k + m)
    names = [f"u{i}" for i in range(k)] + [f"p{j}" for j in range(m)] + [f"y{i}" for i in range(k + m)]
    parents: List[List[int]] = [[] for _ in range(k)] + checks + [[i] for i in range(k + m)]
    tables: List[np.ndarray] = [np.array([0.5, 0.5]) for _ in range(k)]
    for c in checks:
        rows = []
        for config in np.ndindex(*([2] * len(c))):
            x = sum(config) % 2
            rows.append([1.0 - x, float(x)])
        tables.append(np.array(rows).reshape(-1))
    for y in received:
        # log N(y; 2b-1, sigma) up to a shared constant, for b = 0, 1
        loglik = -((y - np.array([-1.0, 1.0])) ** 2) / (2 * spec.sigma**2)
        w = np.exp(loglik - np.logaddexp(loglik[0], loglik[1]))
        tables.append(np.array([[w[0], 1 - w[0]], [w[1], 1 - w[1]]]).reshape(-1))
    net = Network.from_tables([2] * n, parents, tables, names)
    evidence = {k + m + i: 0 for i in range(k + m)}
    return net, evidence


def coding_ensemble(
    sigmas: Sequence[float] = (0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8),
    seeds_per_sigma: int = 6,
    k: int = 16,
    m: int = 24,
    parents_per_parity: int = 4,
    first_seed: int = 0,
) -> List[CodingSpec]:
    """One spec per (sigma, replicate); seeds run consecutively from ``first_seed``."""
    specs = []
    seed = first_seed
    for sigma in sigmas:
        for _ in range(seeds_per_sigma):
            specs.append(CodingSpec(k, m, parents_per_parity, float(sigma), seed))
            seed += 1
    return specs


def random_network(
    seed: int | np.random.Generator,
    n: int,
    max_parents: int = 2,
    cards: Sequence[int] | int = 2,
    edge_prob: float = 0.6,
    zero_prob: float = 0.0,
) -> Network:
    """Random DAG over ``0..n-1`` (parents drawn from lower ids) with Dirichlet(1) CPT columns.

    ``zero_prob`` zeroes that fraction of entries (keeping one per column).
    """
    rng = seed if isinstance(seed, np.random.Generator) else _rng(seed)
    if isinstance(cards, int):
        cards = [cards] * n
    parents = []
    for v in range(n):
        pool = [u for u in range(v) if rng.random() < edge_prob]
        if len(pool) > max_parents:
            pool = sorted(int(u) for u in rng.choice(pool, size=max_parents, replace=False))
        parents.append(pool)
    tables = []
    for v in range(n):
        rows = math.prod(cards[u] for u in parents[v])
        t = rng.dirichlet(np.ones(cards[v]), size=rows)
        if zero_prob > 0:
            mask = rng.random(t.shape) < zero_prob
            mask[np.arange(rows), t.argmax(axis=1)] = False
            t = np.where(mask, 0.0, t)
            t /= t.sum(axis=1, keepdims=True)
        tables.append(t.reshape(-1))
    return Network.from_tables(cards, parents, tables)


@dataclass(frozen=True)
class BenchInstance:
    name: str
    net: Network
    evidence: Mapping[int, int]
    sigma: float = math.nan
    seed: Optional[int] = None

    @classmethod
    def from_spec(cls, spec: CodingSpec) -> "BenchInstance":
        net, e = gen_coding_network(spec)
        return cls(spec.name, net, e, spec.sigma, spec.seed)


@dataclass
class BenchRecord:
    instance: str
    sigma: float
    seed: Optional[int]
    heuristic: str
    limit: int
    splits: Optional[int] = None
    clones: Optional[int] = None
    beta_log: Optional[float] = None
    bound_log: Optional[float] = None
    mpe_log: Optional[float] = None
    space: str = ""
    nodes: Optional[int] = None
    time_ms: Optional[float] = None
    error: Optional[str] = None
    finished: bool = True

    def row(self) -> List[str]:
        def fmt(x):
            if x is None:
                return ""
            if isinstance(x, float):
                return "nan" if math.isnan(x) else repr(x)
            return str(x)

        return [
            fmt(getattr(self, name)) if name != "time_ms" else ("" if self.time_ms is None else f"{self.time_ms:.3f}")
            for name in CSV_HEADER
        ]


@dataclass
class BenchSummary:
    records: List[BenchRecord] = field(default_factory=list)

    @property
    def failures(self) -> List[BenchRecord]:
        return [r for r in self.records if r.error is not None]

    @property
    def censored(self) -> List[BenchRecord]:
        return [r for r in self.records if not r.finished]


def run_bench(
    instances: Iterable[CodingSpec | BenchInstance],
    heuristics: Sequence[StrategyConfig],
    spaces: Sequence[str] = ("reduced",),
    out: TextIO | None = None,
    use_bound: bool = True,
    max_nodes: Optional[int] = None,
    engine: str = "jointree",
) -> BenchSummary:
    """Split each instance with each heuristic and search each requested space.

    One CSV row per (instance, heuristic, space); the space ``"none"`` records
    the split without searching.  A failing row keeps its error in the summary
    and leaves its numeric columns empty.  Rows whose search hit ``max_nodes``
    leave ``mpe_log`` empty.
    """
    writer = csv.writer(out if out is not None else io.StringIO(), lineterminator="\n")
    writer.writerow(CSV_HEADER)
    summary = BenchSummary()
    for inst in instances:
        if isinstance(inst, CodingSpec):
            inst = BenchInstance.from_spec(inst)
        for cfg in heuristics:
            records = _bench_one(inst, cfg, spaces, use_bound, max_nodes, engine)
            for rec in records:
                writer.writerow(rec.row())
                summary.records.append(rec)
    return summary


def _bench_one(inst, cfg, spaces, use_bound, max_nodes, engine) -> List[BenchRecord]:
    def blank(space, err=None):
        return BenchRecord(inst.name, inst.sigma, inst.seed, cfg.kind, cfg.limit, space=space, error=err)

    try:
        start = time.perf_counter()
        sn, order_prime = apply_strategy(inst.net, inst.evidence, cfg)
        engine_order = None
        if order_prime is not None:
            # observed variables go first (they are absent from order_prime);
            # the rest follows order_prime, which keeps clusters within the limit
            seen = set(order_prime)
            engine_order = [v for v in range(sn.net.n) if v not in seen] + list(order_prime)
        evaluator = BoundEvaluator(sn, engine, engine_order)
        bound = evaluator(inst.evidence)[0]
        split_ms = (time.perf_counter() - start) * 1e3
    except Exception as err:  # recorded per row; the sweep goes on
        log.warning("%s %s/%d failed: %s", inst.name, cfg.kind, cfg.limit, err)
        return [blank(space, repr(err)) for space in spaces]
    out = []
    for space in spaces:
        rec = blank(space)
        rec.splits = len(sn.split_variables)
        rec.clones = sn.n_clones
        rec.beta_log = sn.beta_log
        rec.bound_log = bound
        if space == "none":
            rec.time_ms = split_ms
            out.append(rec)
            continue
        try:
            opts = SearchOptions(
                space=space, use_bound=use_bound, engine=engine, engine_order=engine_order, max_nodes=max_nodes
            )
            start = time.perf_counter()
            res = split_bnb(inst.net, sn, inst.evidence, opts)
            rec.time_ms = (time.perf_counter() - start) * 1e3
            rec.nodes = res.nodes_visited
            rec.finished = res.finished
            rec.mpe_log = res.mpe_log if res.finished else None
        except Exception as err:
            log.warning("%s %s/%d %s search failed: %s", inst.name, cfg.kind, cfg.limit, space, err)
            rec.error = repr(err)
        out.append(rec)
    return out
