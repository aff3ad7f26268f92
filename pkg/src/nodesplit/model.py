"""Discrete Bayesian networks, evidence, and the UAI text formats."""

from __future__ import annotations

import math
from dataclasses import dataclass
from graphlib import CycleError as _GraphCycle
from graphlib import TopologicalSorter
from typing import Dict, Iterable, Mapping, Sequence

import numpy as np

from .factors import Factor

__all__ = [
    "Variable",
    "Network",
    "Instantiation",
    "ModelError",
    "UAIParseError",
    "CycleError",
    "NormalizationError",
    "EvidenceError",
    "NORMALIZATION_TOLERANCE",
    "check_instantiation",
    "parse_uai",
    "serialize_uai",
    "parse_evidence",
    "serialize_evidence",
    "read_uai",
    "read_evidence",
]

NORMALIZATION_TOLERANCE = 1e-9

#: partial assignment, variable id -> value index
Instantiation = Dict[int, int]


class ModelError(ValueError):
    pass


class UAIParseError(ModelError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


class CycleError(ModelError):
    pass


class NormalizationError(ModelError):
    pass


class EvidenceError(ModelError):
    pass


@dataclass(frozen=True)
class Variable:
    id: int
    name: str
    cardinality: int

    def __post_init__(self):
        if self.cardinality < 1:
            raise ModelError(f"variable {self.name!r} has cardinality {self.cardinality}")


class Network:
    """A Bayesian network over variables ``0..n-1``.

    ``cpts[v]`` is a log-domain :class:`Factor` whose scope is ``parents[v]``
    followed by ``v``.  Instances are treated as immutable.
    """

    def __init__(
        self,
        variables: Sequence[Variable],
        parents: Sequence[Sequence[int]],
        cpts: Sequence[Factor],
        validate: bool = True,
    ):
        self.variables = tuple(variables)
        self.parents = tuple(tuple(int(u) for u in p) for p in parents)
        self.cpts = tuple(cpts)
        n = len(self.variables)
        if len(self.parents) != n or len(self.cpts) != n:
            raise ModelError("need exactly one parent list and one CPT per variable")
        for i, var in enumerate(self.variables):
            if var.id != i:
                raise ModelError(f"variable ids must be 0..n-1, got {var.id} at position {i}")
        children = [[] for _ in range(n)]
        for v, ps in enumerate(self.parents):
            for u in ps:
                if not 0 <= u < n or u == v:
                    raise ModelError(f"invalid parent {u} of variable {self.name(v)!r}")
                children[u].append(v)
        self.children = tuple(tuple(c) for c in children)
        self.cards = tuple(var.cardinality for var in self.variables)
        try:
            order = TopologicalSorter({v: ps for v, ps in enumerate(self.parents)})
            self.topological_order = tuple(order.static_order())
        except _GraphCycle as err:
            cycle = [self.name(v) for v in err.args[1]]
            raise CycleError(f"parent relation has a cycle through {cycle}") from None
        if validate:
            for v in range(n):
                self._check_cpt(v)

    def _check_cpt(self, v: int) -> None:
        cpt = self.cpts[v]
        family = self.family(v)
        if cpt.scope != family:
            raise ModelError(f"CPT of {self.name(v)!r} has scope {cpt.scope}, expected {family}")
        expected = tuple(self.cards[u] for u in family)
        if cpt.cards != expected:
            raise ModelError(f"CPT of {self.name(v)!r} has shape {cpt.cards}, expected {expected}")
        sums = np.exp(cpt.table).sum(axis=-1)
        if np.any(np.abs(sums - 1.0) > NORMALIZATION_TOLERANCE):
            raise NormalizationError(
                f"CPT of {self.name(v)!r} has a column summing to {sums.flat[np.argmax(np.abs(sums - 1))]!r}"
            )

    @classmethod
    def from_tables(
        cls,
        cards: Sequence[int],
        parents: Sequence[Sequence[int]],
        tables: Sequence[Iterable[float]],
        names: Sequence[str] | None = None,
    ) -> "Network":
        """Build from linear-domain tables listed row-major over parents-then-child."""
        if names is None:
            names = [f"X{i}" for i in range(len(cards))]
        variables = [Variable(i, str(names[i]), int(c)) for i, c in enumerate(cards)]
        cpts = []
        for v, ps in enumerate(parents):
            if any(not 0 <= u < len(cards) or u == v for u in ps):
                raise ModelError(f"invalid parent list {list(ps)} for variable {names[v]!r}")
            scope = tuple(ps) + (v,)
            cpts.append(Factor.from_values(scope, [cards[u] for u in scope], tables[v]))
        return cls(variables, parents, cpts)

    @property
    def n(self) -> int:
        return len(self.variables)

    def name(self, v: int) -> str:
        return self.variables[v].name

    def family(self, v: int) -> tuple[int, ...]:
        return self.parents[v] + (v,)

    def log_prob(self, x: Mapping[int, int]) -> float:
        """Log probability of a complete instantiation."""
        return float(sum(cpt.table[tuple(x[u] for u in cpt.scope)] for cpt in self.cpts))

    def __repr__(self):
        return f"Network(n={self.n}, edges={sum(map(len, self.parents))})"


def check_instantiation(net: Network, x: Mapping[int, int]) -> Instantiation:
    """Validate ``x`` against ``net`` and return it as a plain dict."""
    out = {}
    for v, val in x.items():
        v, val = int(v), int(val)
        if not 0 <= v < net.n:
            raise EvidenceError(f"variable index {v} out of range (network has {net.n})")
        if not 0 <= val < net.cards[v]:
            raise EvidenceError(
                f"value {val} out of range for {net.name(v)!r} with cardinality {net.cards[v]}"
            )
        out[v] = val
    return out


def _tokens(text: str):
    for lineno, line in enumerate(text.splitlines(), start=1):
        for tok in line.split():
            yield tok, lineno


class _Reader:
    def __init__(self, text: str):
        self._toks = list(_tokens(text))
        self._pos = 0

    @property
    def line(self) -> int | None:
        if self._pos < len(self._toks):
            return self._toks[self._pos][1]
        return self._toks[-1][1] if self._toks else None

    def word(self, what: str) -> str:
        if self._pos >= len(self._toks):
            raise UAIParseError(f"unexpected end of input while reading {what}", self.line)
        tok = self._toks[self._pos][0]
        self._pos += 1
        return tok

    def int(self, what: str) -> int:
        line = self.line
        tok = self.word(what)
        try:
            return int(tok)
        except ValueError:
            raise UAIParseError(f"expected integer {what}, got {tok!r}", line) from None

    def float(self, what: str) -> float:
        line = self.line
        tok = self.word(what)
        try:
            return float(tok)
        except ValueError:
            raise UAIParseError(f"expected number {what}, got {tok!r}", line) from None

    def done(self) -> bool:
        return self._pos >= len(self._toks)


def parse_uai(text: str, names: Sequence[str] | None = None) -> Network:
    """Parse a UAI ``BAYES`` model.

    Each factor's scope lists its child last.  Columns within
    :data:`NORMALIZATION_TOLERANCE` of 1 are renormalized; others are rejected.
    """
    r = _Reader(text)
    line = r.line
    header = r.word("header")
    if header.upper() != "BAYES":
        raise UAIParseError(f"expected header BAYES, got {header!r}", line)
    n = r.int("variable count")
    if n < 0:
        raise UAIParseError("negative variable count", r.line)
    cards = []
    for i in range(n):
        line = r.line
        c = r.int(f"cardinality of variable {i}")
        if c < 1:
            raise UAIParseError(f"variable {i} has cardinality {c}", line)
        cards.append(c)
    line = r.line
    nf = r.int("factor count")
    if nf != n:
        raise UAIParseError(f"BAYES model needs one factor per variable: {nf} factors for {n} variables", line)
    scopes = []
    owner = {}
    for f in range(nf):
        line = r.line
        k = r.int(f"scope size of factor {f}")
        if k < 1:
            raise UAIParseError(f"factor {f} has empty scope", line)
        scope = tuple(r.int(f"variable index in factor {f}") for _ in range(k))
        for v in scope:
            if not 0 <= v < n:
                raise UAIParseError(f"variable index {v} out of range in factor {f}", line)
        if len(set(scope)) != k:
            raise UAIParseError(f"factor {f} repeats a variable", line)
        child = scope[-1]
        if child in owner:
            raise UAIParseError(f"variable {child} is the child of factors {owner[child]} and {f}", line)
        owner[child] = f
        scopes.append((scope, line))
    tables: list = [None] * n
    parents: list = [None] * n
    for f, (scope, scope_line) in enumerate(scopes):
        line = r.line
        count = r.int(f"entry count of factor {f}")
        expected = math.prod(cards[v] for v in scope)
        if count != expected:
            raise UAIParseError(
                f"factor {f} lists {count} entries, its scope needs {expected}", line
            )
        values = np.array([r.float(f"entry of factor {f}") for _ in range(count)])
        if np.any(values < 0) or not np.all(np.isfinite(values)):
            raise UAIParseError(f"factor {f} has a negative or non-finite entry", line)
        child = scope[-1]
        cols = values.reshape(-1, cards[child])
        sums = cols.sum(axis=1)
        bad = np.abs(sums - 1.0) > NORMALIZATION_TOLERANCE
        if np.any(bad):
            label = names[child] if names else child
            raise NormalizationError(
                f"line {line}: CPT of variable {label} has a column summing to {sums[bad][0]!r}"
            )
        tables[child] = (cols / sums[:, None]).reshape(-1)
        parents[child] = scope[:-1]
    if not r.done():
        raise UAIParseError("trailing tokens after the last table", r.line)
    return Network.from_tables(cards, parents, tables, names)


def serialize_uai(net: Network) -> str:
    lines = ["BAYES", str(net.n), " ".join(map(str, net.cards)), str(net.n)]
    for v in range(net.n):
        fam = net.family(v)
        lines.append(" ".join(map(str, (len(fam),) + fam)))
    for cpt in net.cpts:
        lines.append("")
        lines.append(str(cpt.size))
        vals = cpt.values().reshape(-1, cpt.cards[-1])
        for row in vals:
            lines.append(" ".join(f"{x:.15g}" for x in row))
    return "\n".join(lines) + "\n"


def parse_evidence(text: str, net: Network) -> Instantiation:
    r = _Reader(text)
    if r.done():
        return {}
    count = r.int("evidence count")
    if count < 0:
        raise UAIParseError("negative evidence count", r.line)
    e: Instantiation = {}
    for _ in range(count):
        line = r.line
        v = r.int("evidence variable")
        val = r.int("evidence value")
        if v in e:
            raise EvidenceError(f"line {line}: variable {v} observed twice")
        try:
            e.update(check_instantiation(net, {v: val}))
        except EvidenceError as err:
            raise EvidenceError(f"line {line}: {err}") from None
    if not r.done():
        raise UAIParseError("trailing tokens after evidence", r.line)
    return e


def serialize_evidence(e: Mapping[int, int]) -> str:
    parts = [str(len(e))]
    for v in sorted(e):
        parts.append(f"{v} {e[v]}")
    return " ".join(parts) + "\n"


def read_uai(path) -> Network:
    with open(path) as fh:
        return parse_uai(fh.read())


def read_evidence(path, net: Network) -> Instantiation:
    with open(path) as fh:
        return parse_evidence(fh.read(), net)
